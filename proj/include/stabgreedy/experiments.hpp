#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stabgreedy/analysis.hpp"
#include "stabgreedy/geometry.hpp"
#include "stabgreedy/greedy.hpp"
#include "stabgreedy/kernels.hpp"

namespace stabgreedy::experiments {

/// STABGREEDY_THREADS if set to a positive integer, else the hardware
/// concurrency (at least 1).
std::size_t worker_count();

/// Runs fn(0..n-1) on a pool of worker_count() threads. The first exception
/// thrown by any task is rethrown after all workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// --- Power function decay on [0,1]^d ----------------------------------------

struct PowerDecayOptions {
    std::vector<KernelFamily> kernels{KernelFamily::BasicMatern, KernelFamily::LinearMatern};
    std::vector<std::size_t> dims{1, 3, 5};
    std::vector<double> gammas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::size_t repeats = 10;
    std::size_t candidates = 30000;
    std::size_t max_n = 800;
    SelectionRule rule = SelectionRule::RandomRestricted;
    std::uint64_t seed = 0;

    /// d = 1 only, 3 repeats, N = 400.
    static PowerDecayOptions quick();
};

struct PowerDecayCell {
    Kernel kernel{KernelFamily::BasicMatern};
    std::size_t dim = 0;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    RunTrace trace;
    RateFit fit;
};

struct PowerDecayRow {
    Kernel kernel{KernelFamily::BasicMatern};
    std::size_t dim = 0;
    double gamma = 0.0;
    double mean_slope = 0.0;
    double std_slope = 0.0;
    double theory = 0.0;
};

struct PowerDecayResult {
    std::vector<PowerDecayCell> cells;
    /// One row per (kernel, dim, gamma), slopes pooled over repeats and windows.
    std::vector<PowerDecayRow> summary;
};

/// Single cell: candidates are `candidates` uniform points of [0,1]^d drawn
/// from (seed, stream = dim).
PowerDecayCell power_decay_cell(const Kernel& kernel, std::size_t dim, double gamma, std::uint64_t seed,
                                std::size_t candidates, std::size_t max_n,
                                SelectionRule rule = SelectionRule::RandomRestricted);

PowerDecayResult power_decay(const PowerDecayOptions& options);

// --- f/P-greedy accuracy on f_alpha over [-0.5, 0.5] ---------------------------

struct FPAccuracyOptions {
    std::vector<double> alphas{1.51, 3.5};
    /// 0 runs the plain (unstabilized) rule.
    std::vector<double> gammas{0.0, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
    std::size_t train = 100000;
    std::size_t test = 100000;
    double cond_bound = 1e14;
    std::size_t cond_check_every = 1;
    std::size_t max_n = 5000;
    bool track_spectrum = false;
    std::uint64_t seed = 0;

    /// 10^4 points per set and a condition check every 10 centers. Does not
    /// reproduce the full-size table.
    static FPAccuracyOptions quick();
    bool is_quick() const { return train < 100000 || cond_check_every > 1; }
};

struct FPAccuracyRow {
    double alpha = 0.0;
    double gamma = 0.0;
    std::size_t n_max = 0;
    double test_residual = 0.0;
    double train_residual = 0.0;
    RunTrace trace;
    nlohmann::json model;
};

std::vector<FPAccuracyRow> fp_accuracy(const FPAccuracyOptions& options);

// --- point distributions on the blob-with-hole domain --------------------------

struct PointDistOptions {
    std::size_t domain_points = 831;
    std::vector<double> gammas{0.0, 0.04, 0.15, 1.0};
    std::size_t n_select = 50;
    std::uint64_t seed = 0;
};

struct PointDistRow {
    double gamma = 0.0;
    PointCloud selected;
    RunTrace trace;
    double mean_distance_to_pole = 0.0;
    double uniformity = 0.0;
};

struct PointDistResult {
    PointCloud domain;
    std::vector<PointDistRow> rows;
};

PointDistResult point_dist(const PointDistOptions& options);

}  // namespace stabgreedy::experiments
