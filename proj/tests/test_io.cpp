#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include "stabgreedy/error.hpp"
#include "stabgreedy/greedy.hpp"
#include "stabgreedy/io.hpp"
#include "test_support.hpp"

namespace stabgreedy {
namespace {

namespace fs = std::filesystem;

bool same(double a, double b) {
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

RunTrace sample_trace(std::uint64_t seed) {
    const PointCloud cand = DomainSampler::unit_cube(2, seed).sample(500);
    GreedyConfig c;
    c.rule = SelectionRule::FOverPGreedy;
    c.gamma = 0.3;
    c.max_n = 30;
    c.cond_check_every = 3;
    c.seed = seed;
    return run(c, Kernel(KernelFamily::LinearMatern), cand, TargetFunction::inverse_square({0.5, 0.5})).trace;
}

TEST(Format, ShortestRoundTrip) {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 10000; ++i) {
        const double v = u(gen) * std::pow(10.0, double(i % 40) - 20);
        ASSERT_EQ(io::parse_double(io::format_double(v)), v);
    }
    EXPECT_EQ(io::format_double(0.1), "0.1");
    EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_TRUE(std::isnan(io::parse_double(io::format_double(std::nan("")))));
    EXPECT_THROW(io::parse_double("1.5x"), Error);
}

TEST(Points, CsvAndJsonRoundTrip) {
    std::mt19937_64 gen(2);
    PointCloud x = testing::random_cloud(gen, 57, 3, -1.0, 1.0);
    std::stringstream ss;
    io::write_points_csv(ss, x, {{"source", "test"}});
    EXPECT_EQ(io::read_points_csv(ss), x);
    EXPECT_EQ(io::points_from_json(io::points_to_json(x)), x);

    std::vector<std::string> labels(x.size(), "a");
    labels[3] = "b";
    x.set_labels(labels);
    std::stringstream ls;
    io::write_points_csv(ls, x);
    EXPECT_EQ(io::read_points_csv(ls).labels(), labels);
}

TEST(Points, FilesAndErrors) {
    const fs::path dir = fs::temp_directory_path() / "stabgreedy_io_test";
    fs::remove_all(dir);
    const PointCloud x = PointCloud::from_rows({{0.1, 0.2}, {0.3, 0.4}});
    io::save_points(dir / "p.csv", x);
    io::save_points(dir / "p.json", x);
    EXPECT_EQ(io::load_points(dir / "p.csv"), x);
    EXPECT_EQ(io::load_points(dir / "p.json"), x);
    try {
        io::load_points(dir / "missing.csv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Io);
    }
    std::stringstream bad("x0,x1\n1,2\n3\n");
    EXPECT_THROW(io::read_points_csv(bad), Error);
    std::stringstream vals("f\n1\n2.5\n");
    EXPECT_EQ(io::read_values_csv(vals), (std::vector<double>{1.0, 2.5}));
    fs::remove_all(dir);
}

TEST(Trace, CsvRoundTrip) {
    const RunTrace t = sample_trace(4);
    std::stringstream ss;
    io::write_trace_csv(ss, t);
    const std::string text = ss.str();
    EXPECT_NE(text.find("# kernel: linear-matern:1"), std::string::npos);
    EXPECT_NE(text.find("\nn,chosen_index,x0,x1,p_max,r_max,fill,sep,lambda_min_upper,cond,restricted_size\n"),
              std::string::npos);
    const RunTrace back = io::read_trace_csv(ss);
    EXPECT_EQ(back.kernel, t.kernel);
    EXPECT_EQ(back.rule, t.rule);
    EXPECT_EQ(back.gamma, t.gamma);
    EXPECT_EQ(back.seed, t.seed);
    EXPECT_EQ(back.stop_reason, t.stop_reason);
    ASSERT_EQ(back.rows.size(), t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto &a = t.rows[i], &b = back.rows[i];
        EXPECT_EQ(a.n, b.n);
        EXPECT_EQ(a.chosen_index, b.chosen_index);
        EXPECT_EQ(a.coords, b.coords);
        EXPECT_TRUE(same(a.p_max, b.p_max));
        EXPECT_TRUE(same(a.r_max, b.r_max));
        EXPECT_TRUE(same(a.fill, b.fill));
        EXPECT_TRUE(same(a.sep, b.sep));
        EXPECT_TRUE(same(a.cond, b.cond));
        EXPECT_EQ(a.restricted_size, b.restricted_size);
    }
}

TEST(Trace, JsonRoundTripAllFields) {
    const RunTrace t = sample_trace(5);
    const RunTrace back = io::trace_from_json(io::trace_to_json(t));
    EXPECT_EQ(back.target, t.target);
    ASSERT_EQ(back.rows.size(), t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto &a = t.rows[i], &b = back.rows[i];
        EXPECT_TRUE(same(a.lambda_min, b.lambda_min));
        EXPECT_TRUE(same(a.chosen_power, b.chosen_power));
        EXPECT_TRUE(same(a.p_max_before, b.p_max_before));
        EXPECT_TRUE(same(a.lambda_min_upper, b.lambda_min_upper));
        EXPECT_TRUE(same(a.sep, b.sep));
    }
    EXPECT_EQ(io::trace_to_json(back).dump(), io::trace_to_json(t).dump());
}

TEST(Trace, UnstabilizedLabel) {
    RunTrace t = sample_trace(6);
    t.gamma = 0.0;
    std::stringstream ss;
    io::write_trace_csv(ss, t);
    EXPECT_NE(ss.str().find("# label: unstabilized"), std::string::npos);
}

TEST(Model, JsonRoundTripEvaluates) {
    const PointCloud cand = DomainSampler::cube(-0.5, 0.5, 1, 3).sample(2000);
    GreedyConfig c;
    c.rule = SelectionRule::FOverPGreedy;
    c.gamma = 0.5;
    c.max_n = 60;
    const RunResult res = run(c, Kernel(KernelFamily::LinearMatern), cand, TargetFunction::falpha(1.51));
    const io::json j = io::model_to_json(res.model);
    const io::SavedModel saved = io::model_from_json(j);
    EXPECT_EQ(saved.kernel, res.model.kernel());
    EXPECT_EQ(saved.centers, res.model.centers());
    const PointCloud probe = DomainSampler::cube(-0.5, 0.5, 1, 9).sample(100);
    EXPECT_LE((saved.evaluate(probe) - res.model.evaluate(probe)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LE(saved.system_residual(), 1e-8);
    EXPECT_EQ(io::model_to_json(res.model).dump(), j.dump());
}

TEST(Model, LoadRejectsCorruptCoefficients) {
    const PointCloud cand = DomainSampler::unit_cube(1, 3).sample(300);
    GreedyConfig c;
    c.rule = SelectionRule::FGreedy;
    c.gamma = 0.5;
    c.max_n = 10;
    const RunResult res = run(c, Kernel(KernelFamily::BasicMatern), cand, TargetFunction::falpha(2.0));
    io::json j = io::model_to_json(res.model);
    j["coefficients"][3] = j["coefficients"][3].get<double>() + 1e-3;
    try {
        io::model_from_json(j);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ModelValidation);
    }
    EXPECT_NO_THROW(io::model_from_json(j, false));
    j.erase("centers");
    EXPECT_THROW(io::model_from_json(j, false), Error);
}

TEST(Rate, JsonRoundTrip) {
    std::vector<double> v(800);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(double(i + 1), -0.5) * (1 + 0.01 * std::sin(i));
    const RateFit r = nine_window_rate(v);
    const auto verdict = sandwich_verdict(r, Kernel(KernelFamily::BasicMatern), 1, 0.1);
    const io::json j = io::rate_to_json(r, verdict);
    EXPECT_EQ(j.at("verdict").get<std::string>(), "pass");
    EXPECT_EQ(j.at("theory").get<double>(), -0.5);
    const RateFit back = io::rate_from_json(j);
    EXPECT_EQ(back.windows, r.windows);
    EXPECT_EQ(back.mean_slope, r.mean_slope);
    EXPECT_EQ(back.std_slope, r.std_slope);
    for (std::size_t i = 0; i < r.fits.size(); ++i) EXPECT_EQ(back.fits[i].slope, r.fits[i].slope);
}

}  // namespace
}  // namespace stabgreedy
