#include "stabgreedy/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "stabgreedy/error.hpp"
#include "stabgreedy/interpolant.hpp"
#include "stabgreedy/io.hpp"

namespace stabgreedy::experiments {

std::size_t worker_count() {
    if (const char* env = std::getenv("STABGREEDY_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

// --- power decay ----------------------------------------------------------------

PowerDecayOptions PowerDecayOptions::quick() {
    PowerDecayOptions o;
    o.dims = {1};
    o.repeats = 3;
    o.max_n = 400;
    return o;
}

PowerDecayCell power_decay_cell(const Kernel& kernel, std::size_t dim, double gamma, std::uint64_t seed,
                                std::size_t candidates, std::size_t max_n, SelectionRule rule) {
    const PointCloud cloud = DomainSampler::unit_cube(dim, seed).sample(candidates, dim);
    GreedyConfig config;
    config.rule = rule;
    config.gamma = gamma;
    config.max_n = max_n;
    config.cond_bound = std::nullopt;
    config.seed = seed;
    RunResult result = run(config, kernel, cloud);
    PowerDecayCell cell;
    cell.kernel = kernel;
    cell.dim = dim;
    cell.gamma = gamma;
    cell.seed = seed;
    cell.fit = nine_window_rate(result.trace.p_max());
    cell.trace = std::move(result.trace);
    return cell;
}

PowerDecayResult power_decay(const PowerDecayOptions& o) {
    struct Job {
        KernelFamily family;
        std::size_t dim;
        double gamma;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (auto fam : o.kernels) {
        for (auto d : o.dims) {
            for (double g : o.gammas) {
                for (std::size_t r = 0; r < o.repeats; ++r) jobs.push_back({fam, d, g, o.seed + r});
            }
        }
    }
    PowerDecayResult result;
    result.cells.resize(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        const Job& j = jobs[i];
        result.cells[i] = power_decay_cell(Kernel(j.family), j.dim, j.gamma, j.seed, o.candidates, o.max_n, o.rule);
    });
    for (std::size_t start = 0; start < jobs.size(); start += o.repeats) {
        std::vector<RateFit> fits;
        for (std::size_t r = 0; r < o.repeats; ++r) fits.push_back(result.cells[start + r].fit);
        const RateFit pooled = pool(fits);
        const PowerDecayCell& c = result.cells[start];
        PowerDecayRow row;
        row.kernel = c.kernel;
        row.dim = c.dim;
        row.gamma = c.gamma;
        row.mean_slope = pooled.mean_slope;
        row.std_slope = pooled.std_slope;
        row.theory = c.kernel.theoretical_power_rate(static_cast<int>(c.dim)).value_or(std::nan(""));
        result.summary.push_back(row);
    }
    return result;
}

// --- f/P accuracy ---------------------------------------------------------------

FPAccuracyOptions FPAccuracyOptions::quick() {
    FPAccuracyOptions o;
    o.train = 10000;
    o.test = 10000;
    o.cond_check_every = 10;
    return o;
}

std::vector<FPAccuracyRow> fp_accuracy(const FPAccuracyOptions& o) {
    const auto sampler = DomainSampler::cube(-0.5, 0.5, 1, o.seed);
    const PointCloud train = sampler.sample(o.train, 0);
    const PointCloud test = sampler.sample(o.test, 1);
    test.require_distinct();
    const Kernel kernel(KernelFamily::LinearMatern);

    std::vector<FPAccuracyRow> rows(o.alphas.size() * o.gammas.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        const double alpha = o.alphas[i / o.gammas.size()];
        const double gamma = o.gammas[i % o.gammas.size()];
        const TargetFunction f = TargetFunction::falpha(alpha);
        GreedyConfig config;
        config.rule = SelectionRule::FOverPGreedy;
        config.gamma = gamma;
        config.max_n = o.max_n;
        config.cond_bound = o.cond_bound;
        config.cond_check_every = o.cond_check_every;
        config.track_spectrum = o.track_spectrum;
        config.seed = o.seed;
        RunResult result = run(config, kernel, train, f);
        FPAccuracyRow& row = rows[i];
        row.alpha = alpha;
        row.gamma = gamma;
        row.n_max = result.model.size();
        row.train_residual = result.model.residual_max();
        row.test_residual = result.model.residual(f, test).cwiseAbs().maxCoeff();
        row.model = io::model_to_json(result.model);
        row.trace = std::move(result.trace);
    });
    return rows;
}

// --- point distribution -----------------------------------------------------------

PointDistResult point_dist(const PointDistOptions& o) {
    PointDistResult result;
    result.domain = DomainSampler::blob_with_hole(o.seed).sample(o.domain_points);
    const std::vector<double> pole{0.17, 0.17};
    const TargetFunction f = TargetFunction::inverse_square(pole);
    const Kernel kernel(KernelFamily::LinearMatern);
    result.rows.resize(o.gammas.size());
    parallel_for(o.gammas.size(), [&](std::size_t i) {
        GreedyConfig config;
        config.rule = SelectionRule::FOverPGreedy;
        config.gamma = o.gammas[i];
        config.max_n = o.n_select;
        config.cond_bound = std::nullopt;
        config.seed = o.seed;
        RunResult run_result = run(config, kernel, result.domain, f);
        PointDistRow& row = result.rows[i];
        row.gamma = o.gammas[i];
        row.selected = run_result.model.centers();
        double total = 0.0;
        for (std::size_t k = 0; k < row.selected.size(); ++k) total += distance(row.selected[k], pole);
        row.mean_distance_to_pole = total / static_cast<double>(row.selected.size());
        row.uniformity = row.selected.size() >= 2 ? uniformity_constant(result.domain, row.selected)
                                                  : std::nan("");
        row.trace = std::move(run_result.trace);
    });
    return result;
}

}  // namespace stabgreedy::experiments
