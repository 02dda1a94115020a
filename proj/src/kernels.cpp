#include "stabgreedy/kernels.hpp"

#include <charconv>
#include <cmath>

#include "stabgreedy/error.hpp"

namespace stabgreedy {

namespace {

struct Offset {
    double radius;
    double component;  // x_axis - y_axis, or 0 when no axis was requested
};

Offset offset(std::span<const double> x, std::span<const double> y, std::size_t axis) {
    if (x.size() != y.size()) {
        throw Error(ErrorCode::DimensionMismatch, "kernel arguments differ in dimension");
    }
    double sq = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double diff = x[k] - y[k];
        sq += diff * diff;
    }
    const double comp = axis < x.size() ? x[axis] - y[axis] : 0.0;
    return {std::sqrt(sq), comp};
}

}  // namespace

std::string_view family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::BasicMatern: return "basic-matern";
        case KernelFamily::LinearMatern: return "linear-matern";
        case KernelFamily::Gaussian: return "gaussian";
    }
    return "unknown";
}

Kernel::Kernel(KernelFamily family, double shape) : family_(family), shape_(shape) {
    if (!(shape > 0.0) || !std::isfinite(shape)) {
        throw Error(ErrorCode::InvalidArgument, "kernel shape parameter must be positive and finite");
    }
}

Kernel Kernel::parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    double shape = 1.0;
    if (colon != std::string_view::npos) {
        const std::string_view num = text.substr(colon + 1);
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), shape);
        if (ec != std::errc() || ptr != num.data() + num.size()) {
            throw Error(ErrorCode::InvalidArgument, "bad kernel shape in '" + std::string(text) + "'");
        }
    }
    for (auto fam : {KernelFamily::BasicMatern, KernelFamily::LinearMatern, KernelFamily::Gaussian}) {
        if (name == family_name(fam)) return Kernel(fam, shape);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown kernel '" + std::string(name) + "'");
}

std::string Kernel::name() const { return std::string(family_name(family_)); }

std::string Kernel::descriptor() const {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), shape_);
    return name() + ":" + std::string(buf, ptr);
}

double Kernel::profile(double r) const {
    const double s = shape_ * r;
    switch (family_) {
        case KernelFamily::BasicMatern: return std::exp(-s);
        case KernelFamily::LinearMatern: return (1.0 + s) * std::exp(-s);
        case KernelFamily::Gaussian: return std::exp(-s * s);
    }
    return 0.0;
}

double Kernel::eval(std::span<const double> x, std::span<const double> y) const {
    return profile(offset(x, y, x.size()).radius);
}

double Kernel::eval_grad1(std::span<const double> x, std::span<const double> y,
                          std::size_t axis) const {
    if (axis >= x.size()) throw Error(ErrorCode::InvalidArgument, "axis out of range");
    const auto [r, u] = offset(x, y, axis);
    const double eps2 = shape_ * shape_;
    switch (family_) {
        case KernelFamily::BasicMatern:
            if (r == 0.0) {
                throw Error(ErrorCode::UnsupportedDerivative,
                            "basic-matern is not differentiable at x == y");
            }
            return -shape_ * std::exp(-shape_ * r) * u / r;
        case KernelFamily::LinearMatern:
            // Phi'(s) = -s exp(-s), so the r in the chain rule cancels.
            return -eps2 * std::exp(-shape_ * r) * u;
        case KernelFamily::Gaussian:
            return -2.0 * eps2 * u * std::exp(-eps2 * r * r);
    }
    return 0.0;
}

double Kernel::eval_hess12(std::span<const double> x, std::span<const double> y,
                           std::size_t axis) const {
    if (axis >= x.size()) throw Error(ErrorCode::InvalidArgument, "axis out of range");
    const auto [r, u] = offset(x, y, axis);
    const double eps2 = shape_ * shape_;
    switch (family_) {
        case KernelFamily::BasicMatern:
            throw Error(ErrorCode::UnsupportedDerivative,
                        "basic-matern has no mixed second derivative");
        case KernelFamily::LinearMatern: {
            // u^2 / r <= r, so the quotient vanishes continuously at the origin.
            const double ratio = r > 0.0 ? u * u / r : 0.0;
            return eps2 * std::exp(-shape_ * r) * (1.0 - shape_ * ratio);
        }
        case KernelFamily::Gaussian:
            return 2.0 * eps2 * std::exp(-eps2 * r * r) * (1.0 - 2.0 * eps2 * u * u);
    }
    return 0.0;
}

Smoothness Kernel::smoothness(int dim) const {
    if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
    switch (family_) {
        case KernelFamily::BasicMatern: return {false, (dim + 1) / 2.0};
        case KernelFamily::LinearMatern: return {false, (dim + 3) / 2.0};
        case KernelFamily::Gaussian: return {true, 0.0};
    }
    return {};
}

std::optional<double> Kernel::theoretical_power_rate(int dim) const {
    const Smoothness s = smoothness(dim);
    if (s.infinite) return std::nullopt;
    return 0.5 - s.tau / dim;
}

}  // namespace stabgreedy
