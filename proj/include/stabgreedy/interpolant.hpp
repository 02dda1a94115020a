#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stabgreedy/geometry.hpp"
#include "stabgreedy/kernels.hpp"

namespace stabgreedy {

/// Dense kernel matrix K_ij = k(rows_i, cols_j).
Eigen::MatrixXd kernel_matrix(const Kernel& kernel, const PointCloud& rows, const PointCloud& cols);

/// f = sum_j w_j k(., y_j). The only class of functions whose native-space
/// norm is computed.
class KernelExpansion {
public:
    KernelExpansion(Kernel kernel, PointCloud centers, Eigen::VectorXd weights);

    const Kernel& kernel() const noexcept { return kernel_; }
    const PointCloud& centers() const noexcept { return centers_; }
    const Eigen::VectorXd& weights() const noexcept { return weights_; }

    double value(std::span<const double> x) const;
    double derivative(std::span<const double> x, std::size_t axis) const;
    /// sqrt(w^T K w)
    double native_norm() const;

private:
    Kernel kernel_;
    PointCloud centers_;
    Eigen::VectorXd weights_;
};

/// Function to be interpolated: either a closed-form builtin or values
/// tabulated on the candidate cloud.
class TargetFunction {
public:
    enum class Kind { FAlpha, InverseSquare, MotivatingExample, Expansion, Tabulated };

    /// |x|^alpha exp(-|x|^2)
    static TargetFunction falpha(double alpha);
    /// 1 / |x - a|^2
    static TargetFunction inverse_square(std::vector<double> a = {0.17, 0.17});
    /// -x + x^2 + (1 + |x|) exp(-|x|), the linear Matern translate at 0 plus a
    /// quadratic; one-dimensional.
    static TargetFunction motivating_example();
    static TargetFunction expansion(KernelExpansion f);
    static TargetFunction tabulated(std::vector<double> values);

    /// "falpha:<alpha>", "inverse-square[:<a0>,<a1>,...]" or "example".
    static TargetFunction parse(std::string_view text);

    Kind kind() const noexcept { return kind_; }
    bool is_tabulated() const noexcept { return kind_ == Kind::Tabulated; }
    std::string descriptor() const;

    /// Closed-form value; throws InvalidArgument for tabulated targets.
    double operator()(std::span<const double> x) const;

    /// Values on a cloud. Tabulated targets require points.size() to equal the
    /// table length and return the table verbatim.
    std::vector<double> values(const PointCloud& points) const;

private:
    explicit TargetFunction(Kind kind) : kind_(kind) {}

    Kind kind_;
    std::vector<double> params_;
    std::optional<KernelExpansion> expansion_;
};

struct ConditionDiagnostics {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double cond = 0.0;
    /// min over the selection history of P_{k-1}(x_k)^2
    double lambda_min_upper = 0.0;
    /// false when the computed lambda_min is not positive
    bool spd = true;
};

/// Incremental kernel interpolant over a fixed candidate cloud.
///
/// Centers are candidate indices. The model keeps the Newton basis evaluated
/// on every candidate (V, M x N), so that after each add the squared Power
/// function and the interpolant are known on all candidates in O(M N). The
/// rows of V at the centers form the Cholesky factor L of the kernel matrix.
class GreedyModel {
public:
    /// Selection refuses candidates whose squared Power value is at or below
    /// this floor.
    static constexpr double kPowerFloor = 1e-14;

    GreedyModel(Kernel kernel, PointCloud candidates,
                std::optional<TargetFunction> target = std::nullopt);

    /// Preallocates storage for n centers.
    void reserve(std::size_t n);

    /// Appends candidate m as the next center. Throws NumericallySingular if its
    /// squared Power value is <= kPowerFloor.
    void add_center(std::size_t m);

    const Kernel& kernel() const noexcept { return kernel_; }
    const PointCloud& candidates() const noexcept { return candidates_; }
    std::size_t dim() const noexcept { return candidates_.dim(); }
    std::size_t size() const noexcept { return n_; }
    bool has_target() const noexcept { return !target_values_.empty(); }

    const std::vector<std::size_t>& center_indices() const noexcept { return center_indices_; }
    PointCloud centers() const;

    /// Per-candidate caches.
    const Eigen::VectorXd& power_sq() const noexcept { return power_sq_; }
    double power_max() const;
    const Eigen::VectorXd& interp_values() const noexcept { return interp_values_; }
    const std::vector<double>& target_values() const noexcept { return target_values_; }
    /// f - s_N on the candidates (requires a target).
    Eigen::VectorXd candidate_residuals() const;
    double residual_max() const;

    Eigen::Ref<const Eigen::MatrixXd> newton_values() const { return newton_.leftCols(n_); }
    Eigen::Ref<const Eigen::MatrixXd> newton_factor() const {
        return factor_.topLeftCorner(n_, n_);
    }
    Eigen::VectorXd newton_coefficients() const { return newton_coef_.head(n_); }
    /// alpha with A alpha = b.
    const Eigen::VectorXd& coefficients() const noexcept { return coefficients_; }
    /// b = f at the centers.
    Eigen::VectorXd center_values() const;
    /// Squared Power value of each center at the moment it was selected.
    const std::vector<double>& selection_power_sq() const noexcept { return selection_power_sq_; }
    double lambda_min_upper() const noexcept { return lambda_min_upper_; }

    Eigen::MatrixXd kernel_matrix() const;

    /// s_N = sum_j alpha_j k(., x_j).
    Eigen::VectorXd evaluate(const PointCloud& points) const;
    /// d/dx_axis s_N.
    Eigen::VectorXd evaluate_derivative(const PointCloud& points, std::size_t axis) const;
    Eigen::VectorXd residual(const TargetFunction& f, const PointCloud& points) const;

    /// Squared Power function at arbitrary points, k(x,x) - |L^{-1} z(x)|^2.
    Eigen::VectorXd power_sq_at(const PointCloud& points) const;

    /// Row i holds the Lagrange functions (l_1(x_i), ..., l_N(x_i)).
    Eigen::MatrixXd cardinal_functions(const PointCloud& points) const;
    double lebesgue_constant(const PointCloud& points) const;

    /// Power function of the functional f -> d/dx_axis f(x).
    double derivative_power(std::span<const double> x, std::size_t axis) const;

    ConditionDiagnostics condition_diagnostics() const;

private:
    void check_dim(const PointCloud& points) const;
    void require_centers() const;
    /// L^{-1} Z^T for a block of kernel rows Z (P x N); returns N x P.
    Eigen::MatrixXd solve_factor(const Eigen::MatrixXd& z_rows) const;
    void grow(std::size_t capacity);

    Kernel kernel_;
    PointCloud candidates_;
    std::vector<double> target_values_;

    std::size_t n_ = 0;
    std::vector<std::size_t> center_indices_;
    std::vector<double> selection_power_sq_;
    double lambda_min_upper_;

    Eigen::MatrixXd newton_;    // M x capacity
    Eigen::MatrixXd factor_;    // capacity x capacity, lower triangular
    Eigen::VectorXd newton_coef_;
    Eigen::VectorXd coefficients_;
    Eigen::VectorXd power_sq_;
    Eigen::VectorXd interp_values_;
};

}  // namespace stabgreedy
