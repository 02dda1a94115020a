#include "stabgreedy/interpolant.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "stabgreedy/error.hpp"

namespace stabgreedy {

namespace {

// Rows of kernel evaluations are built in blocks of this many points.
constexpr std::size_t kBlockRows = 2048;

double parse_double(std::string_view s, std::string_view context) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::InvalidArgument, "bad number '" + std::string(s) + "' in " +
                                                    std::string(context));
    }
    return v;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

double norm_sq(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

}  // namespace

Eigen::MatrixXd kernel_matrix(const Kernel& kernel, const PointCloud& rows, const PointCloud& cols) {
    if (rows.dim() != cols.dim()) throw Error(ErrorCode::DimensionMismatch, "kernel_matrix");
    Eigen::MatrixXd k(rows.size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (std::size_t i = 0; i < rows.size(); ++i) k(i, j) = kernel.eval(rows[i], cols[j]);
    }
    return k;
}

// --- KernelExpansion ---------------------------------------------------------

KernelExpansion::KernelExpansion(Kernel kernel, PointCloud centers, Eigen::VectorXd weights)
    : kernel_(kernel), centers_(std::move(centers)), weights_(std::move(weights)) {
    if (centers_.empty()) throw Error(ErrorCode::EmptySet, "expansion without centers");
    if (static_cast<std::size_t>(weights_.size()) != centers_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "expansion weights vs centers");
    }
}

double KernelExpansion::value(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < centers_.size(); ++j) s += weights_[j] * kernel_.eval(x, centers_[j]);
    return s;
}

double KernelExpansion::derivative(std::span<const double> x, std::size_t axis) const {
    double s = 0.0;
    for (std::size_t j = 0; j < centers_.size(); ++j) {
        s += weights_[j] * kernel_.eval_grad1(x, centers_[j], axis);
    }
    return s;
}

double KernelExpansion::native_norm() const {
    const Eigen::MatrixXd k = stabgreedy::kernel_matrix(kernel_, centers_, centers_);
    return std::sqrt(std::max(0.0, weights_.dot(k * weights_)));
}

// --- TargetFunction ----------------------------------------------------------

TargetFunction TargetFunction::falpha(double alpha) {
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "falpha needs alpha > 0");
    TargetFunction f(Kind::FAlpha);
    f.params_ = {alpha};
    return f;
}

TargetFunction TargetFunction::inverse_square(std::vector<double> a) {
    if (a.empty()) throw Error(ErrorCode::InvalidArgument, "inverse-square needs a pole");
    TargetFunction f(Kind::InverseSquare);
    f.params_ = std::move(a);
    return f;
}

TargetFunction TargetFunction::motivating_example() { return TargetFunction(Kind::MotivatingExample); }

TargetFunction TargetFunction::expansion(KernelExpansion e) {
    TargetFunction f(Kind::Expansion);
    f.expansion_ = std::move(e);
    return f;
}

TargetFunction TargetFunction::tabulated(std::vector<double> values) {
    for (double v : values) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite target value");
    }
    TargetFunction f(Kind::Tabulated);
    f.params_ = std::move(values);
    return f;
}

TargetFunction TargetFunction::parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    const std::string_view args =
        colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    if (name == "falpha") {
        if (args.empty()) throw Error(ErrorCode::InvalidArgument, "falpha needs ':<alpha>'");
        return falpha(parse_double(args, text));
    }
    if (name == "inverse-square") {
        if (args.empty()) return inverse_square();
        std::vector<double> a;
        std::string_view rest = args;
        while (true) {
            const auto comma = rest.find(',');
            a.push_back(parse_double(rest.substr(0, comma), text));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return inverse_square(std::move(a));
    }
    if (name == "example" && args.empty()) return motivating_example();
    throw Error(ErrorCode::InvalidArgument, "unknown target '" + std::string(text) + "'");
}

std::string TargetFunction::descriptor() const {
    switch (kind_) {
        case Kind::FAlpha: return "falpha:" + format_double(params_[0]);
        case Kind::InverseSquare: {
            std::string s = "inverse-square:";
            for (std::size_t k = 0; k < params_.size(); ++k) {
                if (k) s += ',';
                s += format_double(params_[k]);
            }
            return s;
        }
        case Kind::MotivatingExample: return "example";
        case Kind::Expansion: return "kernel-expansion";
        case Kind::Tabulated: return "tabulated";
    }
    return "unknown";
}

double TargetFunction::operator()(std::span<const double> x) const {
    switch (kind_) {
        case Kind::FAlpha: {
            const double r2 = norm_sq(x);
            return std::pow(std::sqrt(r2), params_[0]) * std::exp(-r2);
        }
        case Kind::InverseSquare: {
            if (x.size() != params_.size()) {
                throw Error(ErrorCode::DimensionMismatch, "inverse-square pole dimension");
            }
            double r2 = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) r2 += (x[k] - params_[k]) * (x[k] - params_[k]);
            return 1.0 / r2;
        }
        case Kind::MotivatingExample: {
            if (x.size() != 1) throw Error(ErrorCode::DimensionMismatch, "example target is 1-D");
            const double t = x[0];
            const double r = std::abs(t);
            return -t + t * t + (1.0 + r) * std::exp(-r);
        }
        case Kind::Expansion: return expansion_->value(x);
        case Kind::Tabulated:
            throw Error(ErrorCode::InvalidArgument, "tabulated target has no closed form");
    }
    return 0.0;
}

std::vector<double> TargetFunction::values(const PointCloud& points) const {
    if (kind_ == Kind::Tabulated) {
        if (points.size() != params_.size()) {
            throw Error(ErrorCode::DimensionMismatch, "tabulated target length differs from cloud size");
        }
        return params_;
    }
    std::vector<double> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = (*this)(points[i]);
    return out;
}

// --- GreedyModel -------------------------------------------------------------

GreedyModel::GreedyModel(Kernel kernel, PointCloud candidates, std::optional<TargetFunction> target)
    : kernel_(kernel), candidates_(std::move(candidates)),
      lambda_min_upper_(std::numeric_limits<double>::infinity()) {
    if (candidates_.empty()) throw Error(ErrorCode::EmptySet, "no candidates");
    candidates_.require_distinct();
    const auto m = static_cast<Eigen::Index>(candidates_.size());
    if (target) target_values_ = target->values(candidates_);
    power_sq_.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        power_sq_[i] = kernel_.eval(candidates_[i], candidates_[i]);
    }
    interp_values_ = Eigen::VectorXd::Zero(m);
}

void GreedyModel::grow(std::size_t capacity) {
    const auto cap = static_cast<Eigen::Index>(capacity);
    const Eigen::Index old = newton_.cols();
    if (cap <= old) return;
    newton_.conservativeResize(static_cast<Eigen::Index>(candidates_.size()), cap);
    factor_.conservativeResize(cap, cap);
    factor_.rightCols(cap - old).setZero();
    factor_.bottomRows(cap - old).setZero();
    newton_coef_.conservativeResize(cap);
}

void GreedyModel::reserve(std::size_t n) { grow(n); }

void GreedyModel::add_center(std::size_t m) {
    if (m >= candidates_.size()) throw Error(ErrorCode::InvalidArgument, "candidate index out of range");
    const double p2 = power_sq_[static_cast<Eigen::Index>(m)];
    if (!(p2 > kPowerFloor)) {
        throw Error(ErrorCode::NumericallySingular,
                    "squared Power value " + format_double(p2) + " at candidate " + std::to_string(m));
    }
    if (static_cast<Eigen::Index>(n_) >= newton_.cols()) grow(std::max<std::size_t>(16, 2 * n_));

    const auto n = static_cast<Eigen::Index>(n_);
    const auto mi = static_cast<Eigen::Index>(m);
    const double pivot = std::sqrt(p2);
    const auto x_m = candidates_[m];

    auto col = newton_.col(n);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
        col[i] = kernel_.eval(candidates_[static_cast<std::size_t>(i)], x_m);
    }
    if (n > 0) {
        const Eigen::VectorXd row_m = newton_.row(mi).head(n).transpose();
        col.noalias() -= newton_.leftCols(n) * row_m;
    }
    col /= pivot;

    power_sq_ -= col.cwiseAbs2();
    power_sq_ = power_sq_.cwiseMax(0.0);
    // Selected centers are exact zeros of the Power function.
    for (std::size_t idx : center_indices_) power_sq_[static_cast<Eigen::Index>(idx)] = 0.0;
    power_sq_[mi] = 0.0;

    factor_.row(n).head(n + 1) = newton_.row(mi).head(n + 1);
    factor_(n, n) = pivot;

    if (has_target()) {
        const double r_m = target_values_[m] - interp_values_[mi];
        newton_coef_[n] = r_m / pivot;
        interp_values_.noalias() += newton_coef_[n] * col;
    } else {
        newton_coef_[n] = 0.0;
    }

    center_indices_.push_back(m);
    selection_power_sq_.push_back(p2);
    lambda_min_upper_ = std::min(lambda_min_upper_, p2);
    ++n_;

    if (has_target()) {
        coefficients_ = newton_factor().triangularView<Eigen::Lower>().adjoint().solve(
            newton_coef_.head(static_cast<Eigen::Index>(n_)));
    }
}

PointCloud GreedyModel::centers() const { return candidates_.subset(center_indices_); }

double GreedyModel::power_max() const { return std::sqrt(power_sq_.maxCoeff()); }

Eigen::VectorXd GreedyModel::candidate_residuals() const {
    if (!has_target()) throw Error(ErrorCode::InvalidArgument, "model has no target");
    Eigen::VectorXd r(interp_values_.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        r[i] = target_values_[static_cast<std::size_t>(i)] - interp_values_[i];
    }
    return r;
}

double GreedyModel::residual_max() const { return candidate_residuals().cwiseAbs().maxCoeff(); }

Eigen::VectorXd GreedyModel::center_values() const {
    if (!has_target()) throw Error(ErrorCode::InvalidArgument, "model has no target");
    Eigen::VectorXd b(static_cast<Eigen::Index>(n_));
    for (std::size_t j = 0; j < n_; ++j) b[static_cast<Eigen::Index>(j)] = target_values_[center_indices_[j]];
    return b;
}

Eigen::MatrixXd GreedyModel::kernel_matrix() const {
    const PointCloud c = centers();
    return stabgreedy::kernel_matrix(kernel_, c, c);
}

void GreedyModel::check_dim(const PointCloud& points) const {
    if (!points.empty() && points.dim() != candidates_.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "point dimension differs from the model's");
    }
}

void GreedyModel::require_centers() const {
    if (n_ == 0) throw Error(ErrorCode::EmptySet, "model has no centers");
}

Eigen::MatrixXd GreedyModel::solve_factor(const Eigen::MatrixXd& z_rows) const {
    Eigen::MatrixXd w = z_rows.transpose();
    newton_factor().triangularView<Eigen::Lower>().solveInPlace(w);
    return w;
}

Eigen::VectorXd GreedyModel::evaluate(const PointCloud& points) const {
    check_dim(points);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(points.size()));
    if (n_ == 0) return out;
    if (!has_target()) throw Error(ErrorCode::InvalidArgument, "model has no target");
    const PointCloud c = centers();
    for (std::size_t start = 0; start < points.size(); start += kBlockRows) {
        const std::size_t stop = std::min(points.size(), start + kBlockRows);
        for (std::size_t i = start; i < stop; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) {
                s += coefficients_[static_cast<Eigen::Index>(j)] * kernel_.eval(points[i], c[j]);
            }
            out[static_cast<Eigen::Index>(i)] = s;
        }
    }
    return out;
}

Eigen::VectorXd GreedyModel::evaluate_derivative(const PointCloud& points, std::size_t axis) const {
    check_dim(points);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(points.size()));
    if (n_ == 0) return out;
    if (!has_target()) throw Error(ErrorCode::InvalidArgument, "model has no target");
    const PointCloud c = centers();
    for (std::size_t i = 0; i < points.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            s += coefficients_[static_cast<Eigen::Index>(j)] * kernel_.eval_grad1(points[i], c[j], axis);
        }
        out[static_cast<Eigen::Index>(i)] = s;
    }
    return out;
}

Eigen::VectorXd GreedyModel::residual(const TargetFunction& f, const PointCloud& points) const {
    const std::vector<double> fv = f.values(points);
    Eigen::VectorXd r = evaluate(points);
    for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = fv[static_cast<std::size_t>(i)] - r[i];
    return r;
}

Eigen::VectorXd GreedyModel::power_sq_at(const PointCloud& points) const {
    check_dim(points);
    Eigen::VectorXd out(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = kernel_.eval(points[i], points[i]);
    }
    if (n_ == 0) return out;
    const PointCloud c = centers();
    for (std::size_t start = 0; start < points.size(); start += kBlockRows) {
        const std::size_t stop = std::min(points.size(), start + kBlockRows);
        Eigen::MatrixXd z(static_cast<Eigen::Index>(stop - start), static_cast<Eigen::Index>(n_));
        for (std::size_t i = start; i < stop; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                z(static_cast<Eigen::Index>(i - start), static_cast<Eigen::Index>(j)) =
                    kernel_.eval(points[i], c[j]);
            }
        }
        const Eigen::MatrixXd w = solve_factor(z);
        out.segment(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(stop - start)) -=
            w.colwise().squaredNorm().transpose();
    }
    return out.cwiseMax(0.0);
}

Eigen::MatrixXd GreedyModel::cardinal_functions(const PointCloud& points) const {
    check_dim(points);
    require_centers();
    const double min_diag = newton_factor().diagonal().minCoeff();
    if (!(min_diag > std::sqrt(kPowerFloor))) {
        throw Error(ErrorCode::NumericallySingular, "factor diagonal at the singularity floor");
    }
    const PointCloud c = centers();
    Eigen::MatrixXd w = solve_factor(stabgreedy::kernel_matrix(kernel_, points, c));
    newton_factor().triangularView<Eigen::Lower>().adjoint().solveInPlace(w);
    return w.transpose();
}

double GreedyModel::lebesgue_constant(const PointCloud& points) const {
    double best = 0.0;
    for (std::size_t start = 0; start < points.size(); start += kBlockRows) {
        const std::size_t stop = std::min(points.size(), start + kBlockRows);
        std::vector<std::size_t> idx(stop - start);
        for (std::size_t i = start; i < stop; ++i) idx[i - start] = i;
        const Eigen::MatrixXd l = cardinal_functions(points.subset(idx));
        best = std::max(best, l.cwiseAbs().rowwise().sum().maxCoeff());
    }
    return best;
}

double GreedyModel::derivative_power(std::span<const double> x, std::size_t axis) const {
    if (x.size() != dim()) throw Error(ErrorCode::DimensionMismatch, "derivative_power");
    double value = kernel_.eval_hess12(x, x, axis);
    if (n_ > 0) {
        Eigen::MatrixXd z(1, static_cast<Eigen::Index>(n_));
        for (std::size_t j = 0; j < n_; ++j) {
            z(0, static_cast<Eigen::Index>(j)) = kernel_.eval_grad1(x, candidates_[center_indices_[j]], axis);
        }
        value -= solve_factor(z).squaredNorm();
    }
    return std::sqrt(std::max(0.0, value));
}

ConditionDiagnostics GreedyModel::condition_diagnostics() const {
    require_centers();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(kernel_matrix(), Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    ConditionDiagnostics d;
    d.lambda_min = ev[0];
    d.lambda_max = ev[ev.size() - 1];
    d.spd = d.lambda_min > 0.0;
    d.cond = d.spd ? d.lambda_max / d.lambda_min : std::numeric_limits<double>::infinity();
    d.lambda_min_upper = lambda_min_upper_;
    return d;
}

}  // namespace stabgreedy
