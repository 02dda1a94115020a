#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stabgreedy/kernels.hpp"

namespace stabgreedy {

/// Closed index interval [first, last] of the 1-based iteration counter n.
struct Window {
    std::size_t first = 1;
    std::size_t last = 1;
    bool operator==(const Window&) const = default;
};

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
};

/// Decay-rate estimate from several log-log fits of the same sequence.
struct RateFit {
    std::vector<Window> windows;
    std::vector<LineFit> fits;
    double mean_slope = 0.0;
    /// Sample standard deviation (n - 1 denominator); 0 for a single window.
    double std_slope = 0.0;
};

/// Ordinary least squares of log(values[n-1]) against log(n) for n in window.
LineFit fit_loglog(std::span<const double> values, Window window);

/// The nine windows a in {50, 75, 100} x b in {600, 700, 800}. Shorter
/// sequences of length N use a in {ceil(N/16), ceil(3N/32), ceil(N/8)} and
/// b in {ceil(3N/4), ceil(7N/8), N}.
std::vector<Window> nine_windows(std::size_t length);

RateFit fit_windows(std::span<const double> values, std::span<const Window> windows);
RateFit nine_window_rate(std::span<const double> values);

/// Mean and sample standard deviation of all slopes pooled over several fits
/// (e.g. repeated seeds).
RateFit pool(std::span<const RateFit> fits);

struct SandwichVerdict {
    bool pass = false;
    double theory = 0.0;
    double mean_slope = 0.0;
    double deviation = 0.0;
    double tolerance = 0.0;
    std::string report;
};

/// Compares the fitted exponent with the proven two-sided exponent 1/2 - tau/d.
/// Requires a kernel of finite smoothness.
SandwichVerdict sandwich_verdict(const RateFit& fit, const Kernel& kernel, int dim, double tolerance);

}  // namespace stabgreedy
