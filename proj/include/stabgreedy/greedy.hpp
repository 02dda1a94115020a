#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "stabgreedy/geometry.hpp"
#include "stabgreedy/interpolant.hpp"
#include "stabgreedy/kernels.hpp"
#include "stabgreedy/rng.hpp"

namespace stabgreedy {

enum class SelectionRule { PGreedy, FGreedy, FOverPGreedy, RandomRestricted };

/// "p", "f", "fp", "random"
SelectionRule parse_rule(std::string_view text);
std::string_view rule_name(SelectionRule rule);
bool rule_needs_target(SelectionRule rule);

enum class StopReason { MaxN, PowerTol, ResidualTol, CondBound, Exhausted };

std::string_view stop_reason_name(StopReason reason);
StopReason parse_stop_reason(std::string_view text);

struct GreedyConfig {
    SelectionRule rule = SelectionRule::PGreedy;
    double gamma = 1.0;
    std::size_t max_n = 100;
    double power_tol = 0.0;      // 0 disables
    double residual_tol = 0.0;   // 0 disables
    /// Stop once cond(A) >= cond_bound. nullopt disables the check.
    std::optional<double> cond_bound = 1e14;
    /// Exact eigensolves for the bound run every this many centers.
    std::size_t cond_check_every = 1;
    /// Record the exact spectrum after every add even without a cond bound.
    bool track_spectrum = false;
    std::uint64_t seed = 0;

    /// Throws InvalidArgument on out-of-range settings or a missing target.
    void validate(bool has_target) const;
    /// gamma == 0: the plain, unrestricted rule.
    bool unstabilized() const noexcept { return gamma == 0.0; }
};

struct TraceRow {
    std::size_t n = 0;
    std::size_t chosen_index = 0;
    std::vector<double> coords;
    double p_max = 0.0;          // |P_N|_inf over the candidates after the add
    double r_max = 0.0;          // |r_N|_inf, NaN without a target
    double fill = 0.0;           // h_N
    double sep = 0.0;            // q_N, NaN for N < 2
    double lambda_min_upper = 0.0;
    double cond = 0.0;           // NaN when not computed at this step
    double lambda_min = 0.0;     // NaN when not computed at this step
    std::size_t restricted_size = 0;
    double chosen_power = 0.0;   // P_{N-1}(x_N)
    double p_max_before = 0.0;   // |P_{N-1}|_inf
};

struct RunTrace {
    std::size_t dim = 0;
    std::string kernel;
    std::string rule;
    double gamma = 1.0;
    std::uint64_t seed = 0;
    std::string target;
    StopReason stop_reason = StopReason::MaxN;
    std::vector<TraceRow> rows;

    std::vector<double> p_max() const;
    std::vector<double> r_max() const;
    std::vector<double> fill() const;
    std::vector<double> sep() const;
    std::vector<std::size_t> indices() const;
};

/// Indices m with P(x_m) >= gamma * max P. Throws AllPowerZero when the
/// maximum is zero.
std::vector<std::size_t> restricted_set(const Eigen::VectorXd& power_sq, double gamma);

/// Next center according to `rule` within the gamma-restricted set. Candidates
/// at or below GreedyModel::kPowerFloor are never admissible. Ties resolve to
/// the lowest index. `restricted_size` receives |restricted set| if non-null.
std::size_t select_next(const GreedyModel& model, SelectionRule rule, double gamma, Rng& rng,
                        std::size_t* restricted_size = nullptr);

struct RunResult {
    GreedyModel model;
    RunTrace trace;
};

RunResult run(const GreedyConfig& config, const Kernel& kernel, const PointCloud& candidates,
              const std::optional<TargetFunction>& target = std::nullopt);

}  // namespace stabgreedy
