#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace stabgreedy {

enum class KernelFamily { BasicMatern, LinearMatern, Gaussian };

// Sobolev smoothness of the native space. `tau` is only meaningful when
// `infinite` is false.
struct Smoothness {
    bool infinite = false;
    double tau = 0.0;
};

/// Normalized radial kernel k(x, y) = Phi(eps * |x - y|) with Phi(0) = 1.
///
/// Families:
///   basic-matern   Phi(r) = exp(-r)
///   linear-matern  Phi(r) = (1 + r) exp(-r)
///   gaussian       Phi(r) = exp(-r^2)
///
/// Instances are immutable; all evaluators are pure.
class Kernel {
public:
    explicit Kernel(KernelFamily family, double shape = 1.0);

    /// Parses "basic-matern", "linear-matern" or "gaussian" with an optional
    /// ":<eps>" suffix, e.g. "gaussian:2.5".
    static Kernel parse(std::string_view text);

    KernelFamily family() const noexcept { return family_; }
    double shape() const noexcept { return shape_; }
    std::string name() const;
    /// Round-trippable "name:eps" form accepted by parse().
    std::string descriptor() const;

    /// Phi(eps * r).
    double profile(double r) const;

    double eval(std::span<const double> x, std::span<const double> y) const;

    /// d/dx_axis k(x, y), derivative in the first argument.
    double eval_grad1(std::span<const double> x, std::span<const double> y,
                      std::size_t axis) const;

    /// d/dx_axis d/dy_axis k(x, y). At x == y this is the squared native norm of
    /// the derivative functional.
    double eval_hess12(std::span<const double> x, std::span<const double> y,
                       std::size_t axis) const;

    Smoothness smoothness(int dim) const;

    /// Exponent 1/2 - tau/d of the Power function decay, or nullopt for
    /// kernels of infinite smoothness.
    std::optional<double> theoretical_power_rate(int dim) const;

    bool operator==(const Kernel&) const = default;

private:
    KernelFamily family_;
    double shape_;
};

std::string_view family_name(KernelFamily family);

}  // namespace stabgreedy
