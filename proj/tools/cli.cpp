#include "cli.hpp"

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <filesystem>
#include <ostream>
#include <sstream>

#include "stabgreedy/analysis.hpp"
#include "stabgreedy/error.hpp"
#include "stabgreedy/experiments.hpp"
#include "stabgreedy/geometry.hpp"
#include "stabgreedy/greedy.hpp"
#include "stabgreedy/interpolant.hpp"
#include "stabgreedy/io.hpp"
#include "stabgreedy/kernels.hpp"

namespace stabgreedy::cli {

namespace fs = std::filesystem;
using io::format_double;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string stem(const Kernel& kernel, std::size_t dim, double gamma, std::uint64_t seed) {
    return kernel.name() + "_d" + std::to_string(dim) + "_g" + format_double(gamma) + "_s" +
           std::to_string(seed);
}

bool is_count(const std::string& s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

void write_trace(const fs::path& base, const RunTrace& trace, const std::string& format,
                 const io::Metadata& meta) {
    if (format == "json") {
        io::json j = io::trace_to_json(trace);
        for (const auto& [k, v] : meta) j["metadata"][k] = v;
        io::write_json(fs::path(base.string() + ".trace.json"), j);
    } else {
        std::ostringstream os;
        io::write_trace_csv(os, trace, meta);
        io::write_text(fs::path(base.string() + ".trace.csv"), os.str());
    }
}

void write_model(const fs::path& base, const io::json& model, const io::Metadata& meta) {
    io::json j = model;
    io::json m = io::json::object();
    for (const auto& [k, v] : meta) m[k] = v;
    j["metadata"] = std::move(m);
    io::write_json(fs::path(base.string() + ".model.json"), j);
}

std::string csv_header(const io::Metadata& meta) {
    std::string s;
    for (const auto& [k, v] : meta) s += "# " + k + ": " + v + "\n";
    return s;
}

// --- run ------------------------------------------------------------------------

struct RunFlags {
    std::string kernel = "linear-matern";
    std::string rule = "p";
    double gamma = 1.0;
    std::size_t dim = 1;
    std::string domain = "unit-cube";
    std::string candidates = "1000";
    std::string target;
    std::size_t max_n = 100;
    double power_tol = 0.0;
    double residual_tol = 0.0;
    std::string cond_bound = "1e14";
    std::size_t cond_every = 1;
    std::uint64_t seed = 0;
    std::string out = "out";
    std::string format = "csv";
};

int cmd_run(const RunFlags& f, std::ostream& out) {
    const Kernel kernel = Kernel::parse(f.kernel);
    GreedyConfig config;
    config.rule = parse_rule(f.rule);
    config.gamma = f.gamma;
    config.max_n = f.max_n;
    config.power_tol = f.power_tol;
    config.residual_tol = f.residual_tol;
    config.cond_check_every = f.cond_every;
    config.seed = f.seed;
    if (f.cond_bound == "none" || f.cond_bound == "off") {
        config.cond_bound = std::nullopt;
    } else {
        config.cond_bound = io::parse_double(f.cond_bound);
    }
    if (f.format != "csv" && f.format != "json") throw UsageError("--format must be csv or json");

    PointCloud candidates;
    if (is_count(f.candidates)) {
        const std::size_t n = std::stoul(f.candidates);
        if (f.domain == "unit-cube") {
            candidates = DomainSampler::unit_cube(f.dim, f.seed).sample(n);
        } else if (f.domain == "centered-cube") {
            candidates = DomainSampler::cube(-0.5, 0.5, f.dim, f.seed).sample(n);
        } else if (f.domain == "blob") {
            if (f.dim != 2) throw UsageError("--domain blob requires --dim 2");
            candidates = DomainSampler::blob_with_hole(f.seed).sample(n);
        } else {
            throw UsageError("unknown --domain '" + f.domain + "'");
        }
    } else {
        candidates = io::load_points(f.candidates);
    }

    std::optional<TargetFunction> target;
    if (!f.target.empty()) {
        const fs::path p(f.target);
        if (p.extension() == ".csv") {
            target = TargetFunction::tabulated(io::load_values(p));
        } else {
            target = TargetFunction::parse(f.target);
        }
    }
    config.validate(target.has_value());

    RunResult result = run(config, kernel, candidates, target);
    const io::Metadata meta = {{"command", "run"}, {"domain", f.domain}};
    const fs::path base = fs::path(f.out) / "run" / stem(kernel, candidates.dim(), config.gamma, config.seed);
    write_trace(base, result.trace, f.format, meta);
    write_model(base, io::model_to_json(result.model), meta);

    const double r_max = result.model.has_target() ? result.model.residual_max() : std::nan("");
    out << "N_max=" << result.model.size() << " stop_reason=" << stop_reason_name(result.trace.stop_reason)
        << " p_max=" << format_double(result.model.power_max()) << " r_max=" << format_double(r_max)
        << (config.unstabilized() ? " (unstabilized)" : "") << '\n';
    return kExitOk;
}

// --- power-decay ----------------------------------------------------------------

struct PowerDecayFlags {
    bool quick = false;
    std::vector<std::string> kernels;
    std::vector<std::size_t> dims;
    std::vector<double> gammas;
    std::size_t repeats = 0;
    std::size_t candidates = 0;
    std::size_t max_n = 0;
    std::uint64_t seed = 0;
    double tolerance = 0.15;
    std::string out = "out";
};

int cmd_power_decay(const PowerDecayFlags& f, std::ostream& out) {
    experiments::PowerDecayOptions o = f.quick ? experiments::PowerDecayOptions::quick()
                                               : experiments::PowerDecayOptions{};
    if (!f.kernels.empty()) {
        o.kernels.clear();
        for (const auto& k : f.kernels) o.kernels.push_back(Kernel::parse(k).family());
    }
    if (!f.dims.empty()) o.dims = f.dims;
    if (!f.gammas.empty()) o.gammas = f.gammas;
    if (f.repeats) o.repeats = f.repeats;
    if (f.candidates) o.candidates = f.candidates;
    if (f.max_n) o.max_n = f.max_n;
    o.seed = f.seed;
    for (double g : o.gammas) {
        if (!(g > 0.0 && g <= 1.0)) throw UsageError("power-decay gammas must lie in (0, 1]");
    }

    const auto result = experiments::power_decay(o);
    const fs::path dir = fs::path(f.out) / "power-decay";
    io::Metadata meta = {{"command", "power-decay"},
                         {"candidates", std::to_string(o.candidates)},
                         {"max_n", std::to_string(o.max_n)},
                         {"repeats", std::to_string(o.repeats)}};
    if (f.quick) meta.emplace_back("profile", "quick (non-reproducing)");
    for (const auto& cell : result.cells) {
        const fs::path base = dir / stem(cell.kernel, cell.dim, cell.gamma, cell.seed);
        write_trace(base, cell.trace, "csv", meta);
        const auto verdict = sandwich_verdict(cell.fit, cell.kernel, static_cast<int>(cell.dim), f.tolerance);
        io::json rate = io::rate_to_json(cell.fit, verdict);
        io::json m = io::json::object();
        for (const auto& [k, v] : meta) m[k] = v;
        m["kernel"] = cell.kernel.descriptor();
        m["dim"] = cell.dim;
        m["gamma"] = cell.gamma;
        m["seed"] = cell.seed;
        rate["metadata"] = std::move(m);
        io::write_json(fs::path(base.string() + ".rate.json"), rate);
    }
    std::ostringstream summary;
    summary << csv_header(meta) << "kernel,dim,gamma,mean_slope,std_slope,theory\n";
    for (const auto& row : result.summary) {
        summary << row.kernel.name() << ',' << row.dim << ',' << format_double(row.gamma) << ','
                << format_double(row.mean_slope) << ',' << format_double(row.std_slope) << ','
                << format_double(row.theory) << '\n';
        out << row.kernel.name() << " d=" << row.dim << " gamma=" << format_double(row.gamma)
            << " slope=" << format_double(row.mean_slope) << " +- " << format_double(row.std_slope)
            << " theory=" << format_double(row.theory) << '\n';
    }
    io::write_text(dir / "summary.csv", summary.str());
    return kExitOk;
}

// --- fp-accuracy ----------------------------------------------------------------

struct FPAccuracyFlags {
    bool quick = false;
    std::vector<double> alphas;
    std::vector<double> gammas;
    std::size_t train = 0;
    std::size_t test = 0;
    double cond_bound = 1e14;
    std::size_t cond_every = 0;
    std::size_t max_n = 0;
    std::uint64_t seed = 0;
    std::string out = "out";
};

int cmd_fp_accuracy(const FPAccuracyFlags& f, std::ostream& out) {
    experiments::FPAccuracyOptions o = f.quick ? experiments::FPAccuracyOptions::quick()
                                               : experiments::FPAccuracyOptions{};
    if (!f.alphas.empty()) o.alphas = f.alphas;
    if (!f.gammas.empty()) o.gammas = f.gammas;
    if (f.train) o.train = f.train;
    if (f.test) o.test = f.test;
    if (f.cond_every) o.cond_check_every = f.cond_every;
    if (f.max_n) o.max_n = f.max_n;
    o.cond_bound = f.cond_bound;
    o.seed = f.seed;

    const auto rows = experiments::fp_accuracy(o);
    const fs::path dir = fs::path(f.out) / "fp-accuracy";
    io::Metadata meta = {{"command", "fp-accuracy"},
                         {"kernel", "linear-matern:1"},
                         {"train", std::to_string(o.train)},
                         {"test", std::to_string(o.test)},
                         {"cond_bound", format_double(o.cond_bound)},
                         {"cond_check_every", std::to_string(o.cond_check_every)},
                         {"seed", std::to_string(o.seed)}};
    if (o.is_quick()) meta.emplace_back("profile", "quick (non-reproducing)");
    std::ostringstream table;
    table << csv_header(meta) << "alpha,gamma,n_max,test_residual,train_residual,stop_reason\n";
    const Kernel kernel(KernelFamily::LinearMatern);
    for (const auto& row : rows) {
        const fs::path base = dir / ("a" + format_double(row.alpha)) / stem(kernel, 1, row.gamma, o.seed);
        io::Metadata row_meta = meta;
        row_meta.emplace_back("alpha", format_double(row.alpha));
        write_trace(base, row.trace, "csv", row_meta);
        write_model(base, row.model, row_meta);
        const auto reason = stop_reason_name(row.trace.stop_reason);
        table << format_double(row.alpha) << ',' << format_double(row.gamma) << ',' << row.n_max << ','
              << format_double(row.test_residual) << ',' << format_double(row.train_residual) << ','
              << reason << '\n';
        out << "alpha=" << format_double(row.alpha) << " gamma=" << format_double(row.gamma)
            << (row.gamma == 0.0 ? " (unstabilized)" : "") << " N_max=" << row.n_max
            << " test_residual=" << format_double(row.test_residual) << " stop_reason=" << reason << '\n';
    }
    io::write_text(dir / "table.csv", table.str());
    return kExitOk;
}

// --- point-dist -----------------------------------------------------------------

struct PointDistFlags {
    std::size_t domain_points = 831;
    std::vector<double> gammas;
    std::size_t n_select = 50;
    std::uint64_t seed = 0;
    std::string out = "out";
};

int cmd_point_dist(const PointDistFlags& f, std::ostream& out) {
    experiments::PointDistOptions o;
    o.domain_points = f.domain_points;
    if (!f.gammas.empty()) o.gammas = f.gammas;
    o.n_select = f.n_select;
    o.seed = f.seed;

    const auto result = experiments::point_dist(o);
    const fs::path dir = fs::path(f.out) / "point-dist";
    const io::Metadata meta = {{"command", "point-dist"},
                               {"domain", "blob-with-hole"},
                               {"target", "inverse-square:0.17,0.17"},
                               {"seed", std::to_string(o.seed)}};
    io::save_points(dir / "domain.csv", result.domain, meta);
    const Kernel kernel(KernelFamily::LinearMatern);
    std::ostringstream summary;
    summary << csv_header(meta) << "gamma,n,mean_distance_to_pole,uniformity\n";
    for (const auto& row : result.rows) {
        const fs::path base = dir / stem(kernel, 2, row.gamma, o.seed);
        io::Metadata row_meta = meta;
        row_meta.emplace_back("gamma", format_double(row.gamma));
        io::save_points(fs::path(base.string() + ".points.csv"), row.selected, row_meta);
        write_trace(base, row.trace, "csv", row_meta);
        summary << format_double(row.gamma) << ',' << row.selected.size() << ','
                << format_double(row.mean_distance_to_pole) << ',' << format_double(row.uniformity) << '\n';
        out << "gamma=" << format_double(row.gamma) << " points=" << row.selected.size()
            << " mean_distance_to_a=" << format_double(row.mean_distance_to_pole)
            << " uniformity=" << format_double(row.uniformity) << '\n';
    }
    io::write_text(dir / "summary.csv", summary.str());
    return kExitOk;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gamma-stabilized greedy kernel interpolation"};
    app.require_subcommand(1);

    RunFlags run_flags;
    auto* run = app.add_subcommand("run", "single greedy run");
    run->add_option("--kernel", run_flags.kernel, "basic-matern | linear-matern | gaussian [:eps]");
    run->add_option("--rule", run_flags.rule, "p | f | fp | random");
    run->add_option("--gamma", run_flags.gamma, "restriction parameter in [0, 1]");
    run->add_option("--dim", run_flags.dim, "dimension for sampled candidates")->check(CLI::PositiveNumber);
    run->add_option("--domain", run_flags.domain, "unit-cube | centered-cube | blob");
    run->add_option("--candidates", run_flags.candidates, "count of sampled candidates or a .csv/.json cloud");
    run->add_option("--target", run_flags.target, "falpha:<a> | inverse-square[:a0,a1] | example | values.csv");
    run->add_option("--max-n", run_flags.max_n, "maximal number of centers");
    run->add_option("--power-tol", run_flags.power_tol, "stop when |P_N| <= tol");
    run->add_option("--residual-tol", run_flags.residual_tol, "stop when |r_N| <= tol");
    run->add_option("--cond-bound", run_flags.cond_bound, "stop when cond(A) >= bound; 'none' disables");
    run->add_option("--cond-every", run_flags.cond_every, "condition check period")->check(CLI::PositiveNumber);
    run->add_option("--seed", run_flags.seed, "random seed");
    run->add_option("--out", run_flags.out, "output directory");
    run->add_option("--format", run_flags.format, "csv | json");

    PowerDecayFlags pd;
    auto* power = app.add_subcommand("power-decay", "Power function decay rates on [0,1]^d");
    power->add_flag("--quick", pd.quick, "d=1 only, 3 repeats, N=400");
    power->add_option("--kernels", pd.kernels, "kernel list");
    power->add_option("--dims", pd.dims, "dimension list");
    power->add_option("--gammas", pd.gammas, "gamma list");
    power->add_option("--repeats", pd.repeats, "seeds per cell");
    power->add_option("--candidates", pd.candidates, "candidate count");
    power->add_option("--max-n", pd.max_n, "centers per run");
    power->add_option("--seed", pd.seed, "base seed");
    power->add_option("--tolerance", pd.tolerance, "rate tolerance for per-cell verdicts");
    power->add_option("--out", pd.out, "output directory");

    FPAccuracyFlags fp;
    auto* fpcmd = app.add_subcommand("fp-accuracy", "gamma-stabilized f/P-greedy on f_alpha");
    fpcmd->add_flag("--quick", fp.quick, "1e4 points, condition check every 10 centers");
    fpcmd->add_option("--alphas", fp.alphas, "alpha list");
    fpcmd->add_option("--gammas", fp.gammas, "gamma list (0 = unstabilized)");
    fpcmd->add_option("--train", fp.train, "training points");
    fpcmd->add_option("--test", fp.test, "test points");
    fpcmd->add_option("--cond-bound", fp.cond_bound, "condition number bound");
    fpcmd->add_option("--cond-every", fp.cond_every, "condition check period");
    fpcmd->add_option("--max-n", fp.max_n, "cap on centers");
    fpcmd->add_option("--seed", fp.seed, "seed");
    fpcmd->add_option("--out", fp.out, "output directory");

    PointDistFlags pdist;
    auto* dist = app.add_subcommand("point-dist", "point distributions on the blob-with-hole domain");
    dist->add_option("--domain-points", pdist.domain_points, "discretization size");
    dist->add_option("--gammas", pdist.gammas, "gamma list");
    dist->add_option("--n-select", pdist.n_select, "centers per gamma");
    dist->add_option("--seed", pdist.seed, "seed");
    dist->add_option("--out", pdist.out, "output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_flags, out);
        if (power->parsed()) return cmd_power_decay(pd, out);
        if (fpcmd->parsed()) return cmd_fp_accuracy(fp, out);
        if (dist->parsed()) return cmd_point_dist(pdist, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        if (e.code() == ErrorCode::Io) return kExitIo;
        if (e.code() == ErrorCode::InvalidArgument) return kExitUsage;
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace stabgreedy::cli
