#include "stabgreedy/analysis.hpp"

#include <cmath>
#include <sstream>

#include "stabgreedy/error.hpp"

namespace stabgreedy {

LineFit fit_loglog(std::span<const double> values, Window window) {
    if (window.first < 1 || window.last < window.first || window.last > values.size()) {
        throw Error(ErrorCode::WindowOutOfRange,
                    "window [" + std::to_string(window.first) + ", " + std::to_string(window.last) +
                        "] outside 1.." + std::to_string(values.size()));
    }
    if (window.first == window.last) {
        throw Error(ErrorCode::WindowOutOfRange, "window needs at least two points");
    }
    const std::size_t count = window.last - window.first + 1;
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t n = window.first; n <= window.last; ++n) {
        const double v = values[n - 1];
        if (!(v > 0.0)) {
            throw Error(ErrorCode::NonPositiveValue, "value at n=" + std::to_string(n) + " is not positive");
        }
        mean_x += std::log(static_cast<double>(n));
        mean_y += std::log(v);
    }
    mean_x /= static_cast<double>(count);
    mean_y /= static_cast<double>(count);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t n = window.first; n <= window.last; ++n) {
        const double dx = std::log(static_cast<double>(n)) - mean_x;
        sxx += dx * dx;
        sxy += dx * (std::log(values[n - 1]) - mean_y);
    }
    const double slope = sxy / sxx;
    return {mean_y - slope * mean_x, slope};
}

std::vector<Window> nine_windows(std::size_t length) {
    std::vector<std::size_t> starts, stops;
    if (length >= 800) {
        starts = {50, 75, 100};
        stops = {600, 700, 800};
    } else {
        auto ceil_frac = [length](std::size_t num, std::size_t den) {
            return (length * num + den - 1) / den;
        };
        starts = {ceil_frac(1, 16), ceil_frac(3, 32), ceil_frac(1, 8)};
        stops = {ceil_frac(3, 4), ceil_frac(7, 8), length};
        for (auto& a : starts) a = std::max<std::size_t>(a, 1);
    }
    std::vector<Window> out;
    for (std::size_t a : starts) {
        for (std::size_t b : stops) out.push_back({a, b});
    }
    return out;
}

namespace {

void summarize(RateFit& fit) {
    const std::size_t k = fit.fits.size();
    if (k == 0) throw Error(ErrorCode::EmptySet, "no fits");
    double mean = 0.0;
    for (const auto& f : fit.fits) mean += f.slope;
    mean /= static_cast<double>(k);
    double ss = 0.0;
    for (const auto& f : fit.fits) ss += (f.slope - mean) * (f.slope - mean);
    fit.mean_slope = mean;
    fit.std_slope = k > 1 ? std::sqrt(ss / static_cast<double>(k - 1)) : 0.0;
}

}  // namespace

RateFit fit_windows(std::span<const double> values, std::span<const Window> windows) {
    RateFit fit;
    for (const Window& w : windows) {
        fit.windows.push_back(w);
        fit.fits.push_back(fit_loglog(values, w));
    }
    summarize(fit);
    return fit;
}

RateFit nine_window_rate(std::span<const double> values) {
    const std::vector<Window> windows = nine_windows(values.size());
    return fit_windows(values, windows);
}

RateFit pool(std::span<const RateFit> fits) {
    RateFit out;
    for (const auto& f : fits) {
        out.windows.insert(out.windows.end(), f.windows.begin(), f.windows.end());
        out.fits.insert(out.fits.end(), f.fits.begin(), f.fits.end());
    }
    summarize(out);
    return out;
}

SandwichVerdict sandwich_verdict(const RateFit& fit, const Kernel& kernel, int dim, double tolerance) {
    const auto rate = kernel.theoretical_power_rate(dim);
    if (!rate) {
        throw Error(ErrorCode::InvalidArgument, "no algebraic rate for kernels of infinite smoothness");
    }
    SandwichVerdict v;
    v.theory = *rate;
    v.mean_slope = fit.mean_slope;
    v.deviation = std::abs(fit.mean_slope - *rate);
    v.tolerance = tolerance;
    v.pass = v.deviation <= tolerance;
    std::ostringstream os;
    os << kernel.descriptor() << " d=" << dim << ": fitted slope " << fit.mean_slope << " +- "
       << fit.std_slope << ", upper and lower bound exponent " << *rate << ", |diff| "
       << v.deviation << (v.pass ? " <= " : " > ") << tolerance;
    v.report = os.str();
    return v;
}

}  // namespace stabgreedy
