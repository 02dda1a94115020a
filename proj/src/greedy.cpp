#include "stabgreedy/greedy.hpp"

#include <cmath>
#include <limits>

#include "stabgreedy/error.hpp"

namespace stabgreedy {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename Get>
std::vector<double> column(const std::vector<TraceRow>& rows, Get get) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(get(r));
    return out;
}

}  // namespace

SelectionRule parse_rule(std::string_view text) {
    if (text == "p") return SelectionRule::PGreedy;
    if (text == "f") return SelectionRule::FGreedy;
    if (text == "fp") return SelectionRule::FOverPGreedy;
    if (text == "random") return SelectionRule::RandomRestricted;
    throw Error(ErrorCode::InvalidArgument, "unknown selection rule '" + std::string(text) + "'");
}

std::string_view rule_name(SelectionRule rule) {
    switch (rule) {
        case SelectionRule::PGreedy: return "p";
        case SelectionRule::FGreedy: return "f";
        case SelectionRule::FOverPGreedy: return "fp";
        case SelectionRule::RandomRestricted: return "random";
    }
    return "?";
}

bool rule_needs_target(SelectionRule rule) {
    return rule == SelectionRule::FGreedy || rule == SelectionRule::FOverPGreedy;
}

std::string_view stop_reason_name(StopReason reason) {
    switch (reason) {
        case StopReason::MaxN: return "MaxN";
        case StopReason::PowerTol: return "PowerTol";
        case StopReason::ResidualTol: return "ResidualTol";
        case StopReason::CondBound: return "CondBound";
        case StopReason::Exhausted: return "Exhausted";
    }
    return "?";
}

StopReason parse_stop_reason(std::string_view text) {
    for (auto r : {StopReason::MaxN, StopReason::PowerTol, StopReason::ResidualTol,
                   StopReason::CondBound, StopReason::Exhausted}) {
        if (text == stop_reason_name(r)) return r;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown stop reason '" + std::string(text) + "'");
}

void GreedyConfig::validate(bool has_target) const {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error(ErrorCode::InvalidArgument, "gamma must lie in [0, 1]");
    if (!(power_tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "power_tol must be >= 0");
    if (!(residual_tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "residual_tol must be >= 0");
    if (cond_bound && !(*cond_bound > 1.0)) throw Error(ErrorCode::InvalidArgument, "cond_bound must exceed 1");
    if (cond_check_every == 0) throw Error(ErrorCode::InvalidArgument, "cond_check_every must be positive");
    if (!has_target && (rule_needs_target(rule) || residual_tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "rule '" + std::string(rule_name(rule)) + "' or residual_tol needs a target");
    }
}

std::vector<double> RunTrace::p_max() const { return column(rows, [](const TraceRow& r) { return r.p_max; }); }
std::vector<double> RunTrace::r_max() const { return column(rows, [](const TraceRow& r) { return r.r_max; }); }
std::vector<double> RunTrace::fill() const { return column(rows, [](const TraceRow& r) { return r.fill; }); }
std::vector<double> RunTrace::sep() const { return column(rows, [](const TraceRow& r) { return r.sep; }); }

std::vector<std::size_t> RunTrace::indices() const {
    std::vector<std::size_t> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.chosen_index);
    return out;
}

std::vector<std::size_t> restricted_set(const Eigen::VectorXd& power_sq, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error(ErrorCode::InvalidArgument, "gamma must lie in [0, 1]");
    if (power_sq.size() == 0) throw Error(ErrorCode::EmptySet, "no candidates");
    const double max_sq = power_sq.maxCoeff();
    if (!std::isfinite(max_sq)) throw Error(ErrorCode::InvalidArgument, "non-finite Power values");
    if (!(max_sq > 0.0)) throw Error(ErrorCode::AllPowerZero, "Power function vanishes on all candidates");
    // P >= gamma * max P, compared on squares; gamma = 1 yields exactly the argmax set.
    const double threshold = gamma * gamma * max_sq;
    std::vector<std::size_t> out;
    for (Eigen::Index m = 0; m < power_sq.size(); ++m) {
        if (power_sq[m] >= threshold) out.push_back(static_cast<std::size_t>(m));
    }
    return out;
}

std::size_t select_next(const GreedyModel& model, SelectionRule rule, double gamma, Rng& rng,
                        std::size_t* restricted_size) {
    if (rule_needs_target(rule) && !model.has_target()) {
        throw Error(ErrorCode::InvalidArgument, "selection rule needs a target");
    }
    const Eigen::VectorXd& p2 = model.power_sq();
    const std::vector<std::size_t> restricted = restricted_set(p2, gamma);
    if (restricted_size) *restricted_size = restricted.size();

    std::vector<std::size_t> admissible;
    admissible.reserve(restricted.size());
    for (std::size_t m : restricted) {
        if (p2[static_cast<Eigen::Index>(m)] > GreedyModel::kPowerFloor) admissible.push_back(m);
    }
    if (admissible.empty()) throw Error(ErrorCode::EmptyRestrictedSet, "no admissible candidate");

    // At gamma = 1 the restricted set is the Power argmax set and every rule
    // reduces to P-greedy, including its tie rule.
    if (gamma == 1.0) rule = SelectionRule::PGreedy;
    if (rule == SelectionRule::RandomRestricted) return admissible[rng.below(admissible.size())];

    const Eigen::VectorXd& s = model.interp_values();
    const std::vector<double>& f = model.target_values();
    auto score = [&](std::size_t m) {
        const auto i = static_cast<Eigen::Index>(m);
        switch (rule) {
            case SelectionRule::PGreedy: return p2[i];
            case SelectionRule::FGreedy: return std::abs(f[m] - s[i]);
            case SelectionRule::FOverPGreedy: return std::abs(f[m] - s[i]) / std::sqrt(p2[i]);
            case SelectionRule::RandomRestricted: break;
        }
        return 0.0;
    };
    std::size_t best = admissible.front();
    double best_score = score(best);
    for (std::size_t k = 1; k < admissible.size(); ++k) {
        const double v = score(admissible[k]);
        if (v > best_score) {
            best_score = v;
            best = admissible[k];
        }
    }
    return best;
}

RunResult run(const GreedyConfig& config, const Kernel& kernel, const PointCloud& candidates,
              const std::optional<TargetFunction>& target) {
    config.validate(target.has_value());
    RunResult result{GreedyModel(kernel, candidates, target), RunTrace{}};
    GreedyModel& model = result.model;
    RunTrace& trace = result.trace;
    trace.dim = candidates.dim();
    trace.kernel = kernel.descriptor();
    trace.rule = rule_name(config.rule);
    trace.gamma = config.gamma;
    trace.seed = config.seed;
    trace.target = target ? target->descriptor() : "";

    if (config.max_n == 0) {
        trace.stop_reason = StopReason::MaxN;
        return result;
    }
    model.reserve(std::min(config.max_n, candidates.size()));
    Rng rng(config.seed, 1);
    DistanceTracker distances(model.candidates());

    while (true) {
        TraceRow row;
        row.p_max_before = model.power_max();
        std::size_t m = 0;
        try {
            m = select_next(model, config.rule, config.gamma, rng, &row.restricted_size);
            row.chosen_power = std::sqrt(model.power_sq()[static_cast<Eigen::Index>(m)]);
            model.add_center(m);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::AllPowerZero || e.code() == ErrorCode::EmptyRestrictedSet ||
                e.code() == ErrorCode::NumericallySingular) {
                trace.stop_reason = StopReason::Exhausted;
                return result;
            }
            throw;
        }
        const std::size_t n = model.size();
        const auto x = model.candidates()[m];
        distances.add(x);

        row.n = n;
        row.chosen_index = m;
        row.coords.assign(x.begin(), x.end());
        row.p_max = model.power_max();
        row.r_max = model.has_target() ? model.residual_max() : kNaN;
        row.fill = distances.fill();
        row.sep = n >= 2 ? distances.separation() : kNaN;
        row.lambda_min_upper = model.lambda_min_upper();
        row.cond = kNaN;
        row.lambda_min = kNaN;
        const bool check_cond = config.cond_bound && n % config.cond_check_every == 0;
        if (check_cond || config.track_spectrum) {
            const ConditionDiagnostics diag = model.condition_diagnostics();
            row.cond = diag.cond;
            row.lambda_min = diag.lambda_min;
        }
        trace.rows.push_back(std::move(row));
        const TraceRow& last = trace.rows.back();

        if (n >= config.max_n) {
            trace.stop_reason = StopReason::MaxN;
            break;
        }
        if (config.power_tol > 0.0 && last.p_max <= config.power_tol) {
            trace.stop_reason = StopReason::PowerTol;
            break;
        }
        if (config.residual_tol > 0.0 && model.has_target() && last.r_max <= config.residual_tol) {
            trace.stop_reason = StopReason::ResidualTol;
            break;
        }
        if (check_cond && !(last.cond < *config.cond_bound)) {
            trace.stop_reason = StopReason::CondBound;
            break;
        }
    }
    return result;
}

}  // namespace stabgreedy
