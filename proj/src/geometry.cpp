#include "stabgreedy/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "stabgreedy/error.hpp"
#include "stabgreedy/rng.hpp"

namespace stabgreedy {

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0) throw Error(ErrorCode::InvalidArgument, "point dimension must be positive");
    if (coords_.size() % dim_ != 0) {
        throw Error(ErrorCode::DimensionMismatch, "coordinate count is not a multiple of dim");
    }
    for (double v : coords_) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite coordinate");
    }
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw Error(ErrorCode::EmptySet, "no rows");
    const std::size_t dim = rows.front().size();
    std::vector<double> coords;
    coords.reserve(rows.size() * dim);
    for (const auto& row : rows) {
        if (row.size() != dim) throw Error(ErrorCode::DimensionMismatch, "ragged point rows");
        coords.insert(coords.end(), row.begin(), row.end());
    }
    return PointCloud(dim, std::move(coords));
}

void PointCloud::push_back(std::span<const double> p) {
    if (dim_ == 0) dim_ = p.size();
    if (p.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "point dimension mismatch");
    for (double v : p) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite coordinate");
    }
    coords_.insert(coords_.end(), p.begin(), p.end());
}

PointCloud PointCloud::subset(std::span<const std::size_t> indices) const {
    PointCloud out(dim_);
    out.coords_.reserve(indices.size() * dim_);
    for (std::size_t i : indices) {
        if (i >= size()) throw Error(ErrorCode::InvalidArgument, "subset index out of range");
        out.push_back(point(i));
    }
    return out;
}

void PointCloud::set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != size()) {
        throw Error(ErrorCode::DimensionMismatch, "label count differs from point count");
    }
    labels_ = std::move(labels);
}

std::optional<std::pair<std::size_t, std::size_t>> PointCloud::find_duplicate() const {
    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto less = [&](std::size_t a, std::size_t b) {
        const auto pa = point(a), pb = point(b);
        return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
    };
    std::stable_sort(order.begin(), order.end(), less);
    for (std::size_t k = 1; k < order.size(); ++k) {
        const auto pa = point(order[k - 1]), pb = point(order[k]);
        if (std::equal(pa.begin(), pa.end(), pb.begin())) {
            return std::minmax(order[k - 1], order[k]);
        }
    }
    return std::nullopt;
}

void PointCloud::require_distinct() const {
    if (auto dup = find_duplicate()) {
        throw Error(ErrorCode::DuplicatePoints, "points " + std::to_string(dup->first) + " and " +
                                                    std::to_string(dup->second) + " coincide");
    }
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
    double sq = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - y[k];
        sq += d * d;
    }
    return sq;
}

double distance(std::span<const double> x, std::span<const double> y) {
    return std::sqrt(squared_distance(x, y));
}

// --- domains -----------------------------------------------------------------

namespace {

constexpr double kBlobShift = 0.1;
constexpr double kHoleCenter[2] = {0.17, 0.17};
constexpr double kHoleRadiusSq = 0.003;
// Contains Omega_1: the profile is bounded by 0.35 * 3 * 0.45.
constexpr double kBlobBox[2][2] = {{-0.7, 0.9}, {-0.8, 0.8}};

}  // namespace

double blob_profile(double phi) {
    const double u = phi / std::numbers::pi;
    const double c = std::cos(phi);
    return 0.35 * (std::cos(std::numbers::pi * u * u) + 2.0) * (0.15 * c * c + 0.3);
}

bool blob_with_hole_contains(std::span<const double> p) {
    if (p.size() != 2) throw Error(ErrorCode::DimensionMismatch, "blob domain is two-dimensional");
    const double x = p[0] - kBlobShift;
    const double y = p[1];
    double theta = std::atan2(y, x);
    if (theta < 0.0) theta += 2.0 * std::numbers::pi;
    if (!(std::hypot(x, y) < blob_profile(theta + std::numbers::pi))) return false;
    const double dx = p[0] - kHoleCenter[0], dy = p[1] - kHoleCenter[1];
    return dx * dx + dy * dy > kHoleRadiusSq;
}

DomainSampler DomainSampler::unit_cube(std::size_t dim, std::uint64_t seed) {
    return cube(0.0, 1.0, dim, seed);
}

DomainSampler DomainSampler::cube(double lo, double hi, std::size_t dim, std::uint64_t seed) {
    if (dim == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
    if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "empty cube");
    return DomainSampler(DomainKind::Box, dim, lo, hi, seed);
}

DomainSampler DomainSampler::blob_with_hole(std::uint64_t seed) {
    return DomainSampler(DomainKind::BlobWithHole, 2, 0.0, 0.0, seed);
}

std::string DomainSampler::description() const {
    if (kind_ == DomainKind::BlobWithHole) return "blob-with-hole";
    return "cube[" + std::to_string(lo_) + "," + std::to_string(hi_) + "]^" + std::to_string(dim_);
}

bool DomainSampler::contains(std::span<const double> p) const {
    if (p.size() != dim_) return false;
    if (kind_ == DomainKind::BlobWithHole) return blob_with_hole_contains(p);
    return std::all_of(p.begin(), p.end(), [&](double v) { return v >= lo_ && v <= hi_; });
}

PointCloud DomainSampler::sample(std::size_t n, std::uint64_t stream) const {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
    Rng rng(seed_, stream);
    std::vector<double> coords;
    coords.reserve(n * dim_);
    if (kind_ == DomainKind::Box) {
        for (std::size_t i = 0; i < n * dim_; ++i) coords.push_back(rng.uniform(lo_, hi_));
        return PointCloud(dim_, std::move(coords));
    }
    // Rejection sampling; acceptance below 1e-4 means the geometry is broken.
    const std::size_t budget = 10000 * n + 10000;
    std::size_t draws = 0;
    double p[2];
    while (coords.size() < n * 2) {
        if (++draws > budget) {
            throw Error(ErrorCode::RejectionBudgetExceeded, "acceptance rate below 1e-4");
        }
        p[0] = rng.uniform(kBlobBox[0][0], kBlobBox[0][1]);
        p[1] = rng.uniform(kBlobBox[1][0], kBlobBox[1][1]);
        if (blob_with_hole_contains(p)) coords.insert(coords.end(), p, p + 2);
    }
    return PointCloud(2, std::move(coords));
}

// --- distance diagnostics ----------------------------------------------------

double fill_distance(const PointCloud& candidates, const PointCloud& centers) {
    if (candidates.empty() || centers.empty()) {
        throw Error(ErrorCode::EmptySet, "fill distance needs candidates and centers");
    }
    if (candidates.dim() != centers.dim()) throw Error(ErrorCode::DimensionMismatch, "fill distance");
    double worst = 0.0;
    for (std::size_t m = 0; m < candidates.size(); ++m) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < centers.size(); ++j) {
            best = std::min(best, squared_distance(candidates[m], centers[j]));
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

double separation_distance(const PointCloud& points) {
    if (points.size() < 2) throw Error(ErrorCode::TooFewPoints, "separation needs two points");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            best = std::min(best, squared_distance(points[i], points[j]));
        }
    }
    return std::sqrt(best);
}

double uniformity_constant(const PointCloud& candidates, const PointCloud& centers) {
    return fill_distance(candidates, centers) / separation_distance(centers);
}

DistanceTracker::DistanceTracker(const PointCloud& candidates)
    : candidates_(candidates),
      centers_(candidates.dim()),
      nearest_sq_(candidates.size(), std::numeric_limits<double>::infinity()),
      max_nearest_sq_(std::numeric_limits<double>::infinity()),
      min_pair_sq_(std::numeric_limits<double>::infinity()) {
    if (candidates.empty()) throw Error(ErrorCode::EmptySet, "tracker needs candidates");
}

void DistanceTracker::add(std::span<const double> center) {
    if (center.size() != candidates_.dim()) throw Error(ErrorCode::DimensionMismatch, "tracker");
    for (std::size_t j = 0; j < centers_.size(); ++j) {
        min_pair_sq_ = std::min(min_pair_sq_, squared_distance(centers_[j], center));
    }
    centers_.push_back(center);
    double worst = 0.0;
    for (std::size_t m = 0; m < candidates_.size(); ++m) {
        nearest_sq_[m] = std::min(nearest_sq_[m], squared_distance(candidates_[m], center));
        worst = std::max(worst, nearest_sq_[m]);
    }
    max_nearest_sq_ = worst;
}

double DistanceTracker::fill() const {
    if (centers_.empty()) throw Error(ErrorCode::EmptySet, "no centers yet");
    return std::sqrt(max_nearest_sq_);
}

double DistanceTracker::separation() const { return std::sqrt(min_pair_sq_); }

}  // namespace stabgreedy
