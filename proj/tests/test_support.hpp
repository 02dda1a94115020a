#pragma once

// Test-only oracles. They solve the dense kernel system directly and share no
// code path with the Newton-basis recursion in GreedyModel.

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "stabgreedy/geometry.hpp"
#include "stabgreedy/kernels.hpp"

namespace stabgreedy::testing {

inline PointCloud random_cloud(std::mt19937_64& gen, std::size_t n, std::size_t dim, double lo = 0.0,
                               double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> c(n * dim);
    for (auto& v : c) v = u(gen);
    return PointCloud(dim, std::move(c));
}

inline Eigen::MatrixXd dense_kernel(const Kernel& k, const PointCloud& a, const PointCloud& b) {
    Eigen::MatrixXd m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = k.eval(a[i], b[j]);
    }
    return m;
}

struct DenseOracle {
    Eigen::MatrixXd a;
    Eigen::FullPivLU<Eigen::MatrixXd> lu;

    DenseOracle(const Kernel& k, const PointCloud& centers) : a(dense_kernel(k, centers, centers)), lu(a) {}

    /// k(x,x) - z^T A^{-1} z per point.
    Eigen::VectorXd power_sq(const Kernel& k, const PointCloud& centers, const PointCloud& points) const {
        const Eigen::MatrixXd z = dense_kernel(k, points, centers);
        const Eigen::MatrixXd sol = lu.solve(z.transpose());
        Eigen::VectorXd out(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            out[i] = k.eval(points[i], points[i]) - z.row(i).dot(sol.col(i));
        }
        return out;
    }

    Eigen::VectorXd interpolate(const Kernel& k, const PointCloud& centers, const Eigen::VectorXd& b,
                                const PointCloud& points) const {
        const Eigen::VectorXd alpha = lu.solve(b);
        return dense_kernel(k, points, centers) * alpha;
    }

    Eigen::MatrixXd cardinal(const Kernel& k, const PointCloud& centers, const PointCloud& points) const {
        const Eigen::MatrixXd z = dense_kernel(k, points, centers);
        return lu.solve(z.transpose()).transpose();
    }
};

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= x.size();
    my /= y.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    }
    return sxy / sxx;
}

}  // namespace stabgreedy::testing
