#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stabgreedy {

/// Finite point set in R^d, stored row-major. Immutable once handed to a model.
class PointCloud {
public:
    PointCloud() = default;
    explicit PointCloud(std::size_t dim) : dim_(dim) {}
    PointCloud(std::size_t dim, std::vector<double> coords);

    static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    bool empty() const noexcept { return size() == 0; }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    std::span<const double> operator[](std::size_t i) const { return point(i); }
    const std::vector<double>& coords() const noexcept { return coords_; }

    void push_back(std::span<const double> p);
    PointCloud subset(std::span<const std::size_t> indices) const;

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    void set_labels(std::vector<std::string> labels);

    /// First pair (i, j), i < j, of bitwise-equal points, if any.
    std::optional<std::pair<std::size_t, std::size_t>> find_duplicate() const;
    /// Throws DuplicatePoints if two points coincide.
    void require_distinct() const;

    bool operator==(const PointCloud&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
    std::vector<std::string> labels_;
};

double squared_distance(std::span<const double> x, std::span<const double> y);
double distance(std::span<const double> x, std::span<const double> y);

// --- domains -----------------------------------------------------------------

/// Radius profile of the two-dimensional test domain boundary.
double blob_profile(double phi);

/// Membership in the blob-with-hole domain Omega_1 \ Omega_2.
bool blob_with_hole_contains(std::span<const double> p);

enum class DomainKind { Box, BlobWithHole };

/// Reproducible uniform sampler over an experimental domain. Sampling is a
/// pure function of (seed, stream, n).
class DomainSampler {
public:
    static DomainSampler unit_cube(std::size_t dim, std::uint64_t seed);
    /// [lo, hi]^dim
    static DomainSampler cube(double lo, double hi, std::size_t dim, std::uint64_t seed);
    static DomainSampler blob_with_hole(std::uint64_t seed);

    DomainKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::string description() const;

    bool contains(std::span<const double> p) const;

    PointCloud sample(std::size_t n, std::uint64_t stream = 0) const;

private:
    DomainSampler(DomainKind kind, std::size_t dim, double lo, double hi, std::uint64_t seed)
        : kind_(kind), dim_(dim), lo_(lo), hi_(hi), seed_(seed) {}

    DomainKind kind_;
    std::size_t dim_;
    double lo_;
    double hi_;
    std::uint64_t seed_;
};

// --- distance diagnostics ----------------------------------------------------

/// Discrete fill distance: max over candidates of the distance to the closest
/// center.
double fill_distance(const PointCloud& candidates, const PointCloud& centers);

/// Minimum pairwise distance.
double separation_distance(const PointCloud& points);

/// h / q.
double uniformity_constant(const PointCloud& candidates, const PointCloud& centers);

/// Incremental fill and separation distances for a growing center set over a
/// fixed candidate cloud. O(M d) per added center.
class DistanceTracker {
public:
    explicit DistanceTracker(const PointCloud& candidates);

    void add(std::span<const double> center);

    std::size_t centers() const noexcept { return centers_.size(); }
    double fill() const;
    /// +inf while fewer than two centers are present.
    double separation() const;

private:
    PointCloud candidates_;
    PointCloud centers_;
    std::vector<double> nearest_sq_;
    double max_nearest_sq_;
    double min_pair_sq_;
};

}  // namespace stabgreedy
