#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cauchy/errors.hpp"
#include "cauchy/experiment.hpp"
#include "support.hpp"

namespace cauchy {
namespace {

namespace fs = std::filesystem;
using testing::kPi;

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("cauchy_experiment_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(path);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

ExperimentConfig small_config(double theta, const fs::path& out) {
    ExperimentConfig c;
    c.theta = theta;
    c.n_boundary = 32;
    c.output_dir = out;
    return c;
}

TEST(ParseAngle, Forms) {
    EXPECT_DOUBLE_EQ(parse_angle("pi/6"), kPi / 6);
    EXPECT_DOUBLE_EQ(parse_angle("pi/2"), kPi / 2);
    EXPECT_DOUBLE_EQ(parse_angle("2*pi/3"), 2 * kPi / 3);
    EXPECT_DOUBLE_EQ(parse_angle("pi"), kPi);
    EXPECT_DOUBLE_EQ(parse_angle("0.75"), 0.75);
    EXPECT_THROW((void)parse_angle("tau"), ConfigError);
    EXPECT_THROW((void)parse_angle("pi/0"), ConfigError);
    EXPECT_EQ(parse_algorithm("both"), Algorithm::Both);
    EXPECT_THROW((void)parse_algorithm("fast"), ConfigError);
}

TEST(Config, Validation) {
    ExperimentConfig c;
    c.theta = kPi / 2;
    EXPECT_NO_THROW(c.validate());
    c.theta = 7.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c.theta = kPi / 2;
    c.n_boundary = 4;
    EXPECT_THROW(c.validate(), ConfigError);
    c.n_boundary = 64;
    c.noise_level = -0.1;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(DiskProblem, Examples) {
    ExperimentConfig c;
    c.theta = kPi / 2;
    c.n_boundary = 8;
    const auto p = build_section5_problem(c);
    ASSERT_EQ(p.exact.u.size(), 3u);
    EXPECT_NEAR(p.exact.u.values[1], 0.0, 1e-14);
    EXPECT_NEAR(p.exact.dudn.values[1], 0.0, 1e-14);
    EXPECT_NEAR(p.u0.values[0], -0.5, 1e-15);
    EXPECT_NEAR(p.exact.u.values[0], 1.0, 1e-15);
    const auto exact_f = interpolate_boundary([](double x, double) { return 2 * x * x - 1; }, p.mesh, kGamma0);
    EXPECT_LE(testing::max_abs_diff(p.data.f.values, exact_f.values), 1e-14);
    for (std::size_t k = 0; k < exact_f.size(); ++k)
        EXPECT_NEAR(p.data.g.values[k], 2 * exact_f.values[k], 1e-14);
}

TEST(DiskProblem, NoiseIsSeeded) {
    ExperimentConfig c;
    c.theta = kPi / 3;
    c.n_boundary = 64;
    c.noise_level = 0.01;
    c.seed = 5;
    const auto a = build_section5_problem(c);
    const auto b = build_section5_problem(c);
    EXPECT_EQ(a.data.f.values, b.data.f.values);
    EXPECT_EQ(a.data.g.values, b.data.g.values);
    c.noise_level = 0.0;
    const auto clean = build_section5_problem(c);
    EXPECT_NE(a.data.f.values, clean.data.f.values);
    EXPECT_NE(a.data.g.values, clean.data.g.values);
}

TEST(RunExperiment, WritesCurvesWithSchema) {
    const auto dir = scratch("schema");
    const auto summary = run_experiment(small_config(kPi / 6, dir));
    ASSERT_EQ(summary.runs.size(), 2u);
    for (const auto* name : {"standard", "alternating"}) {
        const auto rows = read_csv(dir / (std::string(name) + ".csv"));
        ASSERT_FALSE(rows.empty());
        EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "E", "e_u", "e_v", "solves"}));
        const auto* run = summary.find(parse_algorithm(name));
        ASSERT_NE(run, nullptr);
        EXPECT_EQ(rows.size() - 1, run->iterations);
        for (std::size_t r = 1; r < rows.size(); ++r) EXPECT_GT(std::stod(rows[r][2]), 0.0);
        // 12 significant digits on disk.
        EXPECT_NEAR(std::stod(rows.back()[1]), run->final_E, 1e-11 * run->final_E);
        EXPECT_EQ(std::stoul(rows.back()[4]), run->total_solves);
    }
    const auto summary_rows = read_csv(dir / "summary.csv");
    ASSERT_EQ(summary_rows.size(), 3u);
    EXPECT_EQ(summary_rows[0][0], "algorithm");
    const auto trace_rows = read_csv(dir / "trace.csv");
    EXPECT_EQ(trace_rows[0], (std::vector<std::string>{"t", "u_exact", "u0", "u_standard", "u_alternating"}));
    fs::remove_all(dir);
}

TEST(RunExperiment, MaxItersOne) {
    const auto dir = scratch("cap");
    auto c = small_config(kPi / 4, dir);
    c.max_iters = 1;
    const auto s = run_experiment(c);
    for (const auto& r : s.runs) EXPECT_EQ(r.iterations, 1u);
    EXPECT_FALSE(s.all_converged());
    EXPECT_EQ(read_csv(dir / "standard.csv").size(), 2u);
    fs::remove_all(dir);
}

TEST(RunExperiment, SingleAlgorithmLeavesColumnEmpty) {
    const auto dir = scratch("single");
    auto c = small_config(kPi / 4, dir);
    c.algorithm = Algorithm::Standard;
    const auto s = run_experiment(c);
    ASSERT_EQ(s.runs.size(), 1u);
    EXPECT_FALSE(fs::exists(dir / "alternating.csv"));
    const auto rows = read_csv(dir / "trace.csv");
    ASSERT_GT(rows.size(), 1u);
    EXPECT_EQ(rows[1].size(), 5u);
    EXPECT_TRUE(rows[1][4].empty());
    fs::remove_all(dir);
}

TEST(RunExperiment, UnwritableDirectoryFailsBeforeSolving) {
    const auto dir = scratch("blocked");
    fs::create_directories(dir);
    std::ofstream(dir / "file") << "x";
    auto c = small_config(kPi / 6, dir / "file" / "sub");
    c.n_boundary = 64;
    EXPECT_THROW((void)run_experiment(c), IoError);
    fs::remove_all(dir);
}

TEST(RunExperiment, Deterministic) {
    const auto a = scratch("det_a");
    const auto b = scratch("det_b");
    auto c = small_config(kPi / 3, a);
    c.noise_level = 0.01;
    c.seed = 3;
    (void)run_experiment(c);
    c.output_dir = b;
    (void)run_experiment(c);
    for (const auto* name : {"standard.csv", "alternating.csv", "trace.csv", "summary.csv"})
        EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(RunExperiment, ConvergedTracesBeatInitialGuess) {
    const auto dir = scratch("trace");
    (void)run_experiment(small_config(kPi / 4, dir));
    const auto rows = read_csv(dir / "trace.csv");
    double guess = 0.0, std_err = 0.0, alt_err = 0.0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const double exact = std::stod(rows[r][1]);
        guess += std::pow(std::stod(rows[r][2]) - exact, 2);
        std_err += std::pow(std::stod(rows[r][3]) - exact, 2);
        alt_err += std::pow(std::stod(rows[r][4]) - exact, 2);
    }
    EXPECT_LT(std_err, guess);
    EXPECT_LT(alt_err, guess);
    fs::remove_all(dir);
}

TEST(RunExperiment, NarrowArcConvergesFaster) {
    // Standard e_u for theta = pi/6 stays below theta = pi/2 from n = 10 on.
    ExperimentConfig c;
    c.n_boundary = 64;
    c.max_iters = 300;
    c.tol_E = 1e-12;
    auto run = [&](double theta) {
        c.theta = theta;
        const auto p = build_section5_problem(c);
        KmfOptions o;
        o.exact = p.exact;
        o.max_iters = c.max_iters;
        o.tol_E = c.tol_E;
        return kmf_standard(p.mesh, p.data, p.u0, o);
    };
    const auto narrow = run(kPi / 6);
    const auto wide = run(kPi / 2);
    const std::size_t n = std::min(narrow.iterations(), wide.iterations());
    for (std::size_t k = 9; k < n; ++k) EXPECT_LT(*narrow.history[k].e_u, *wide.history[k].e_u) << "n=" << k + 1;
}

TEST(RunExperiment, AlternatingAheadAtIteration200) {
    ExperimentConfig c;
    c.theta = kPi / 2;
    c.n_boundary = 128;
    const auto p = build_section5_problem(c);
    KmfOptions o;
    o.exact = p.exact;
    o.max_iters = 200;
    const auto s = kmf_standard(p.mesh, p.data, p.u0, o);
    const auto a = kmf_alternating(p.mesh, p.data, p.u0, o);
    ASSERT_EQ(s.iterations(), 200u);
    ASSERT_EQ(a.iterations(), 200u);
    // Ahead by more than the drift left by inner CG stopping, which reaches
    // about 1e-7 relative between otherwise identical iterate sequences.
    EXPECT_LT(*a.history.back().e_u, (1.0 - 1e-6) * *s.history.back().e_u)
        << "alternating " << *a.history.back().e_u << " vs standard " << *s.history.back().e_u;
}

TEST(CompareReport, RowsAndRatios) {
    RunSummary s;
    s.theta = kPi / 6;
    s.n_boundary = 128;
    AlgorithmSummary st;
    st.iterations = 40;
    st.final_e_u = 1e-2;
    AlgorithmSummary al = st;
    al.algorithm = Algorithm::Alternating;
    s.runs = {st, al};
    EXPECT_EQ(iteration_ratio(s), 1.0);
    const auto one = compare_report({s});
    EXPECT_EQ(std::count(one.begin(), one.end(), '\n'), 2);
    EXPECT_NE(one.find("1.000"), std::string::npos);
    const auto two = compare_report({s, s});
    EXPECT_EQ(std::count(two.begin(), two.end(), '\n'), 3);
    RunSummary only_std = s;
    only_std.runs = {st};
    EXPECT_FALSE(iteration_ratio(only_std).has_value());
    EXPECT_NE(format_summary(s).find("standard"), std::string::npos);
}

TEST(CompareReport, SweepRatiosAtMostOne) {
    std::vector<RunSummary> sweep;
    for (const double theta : {kPi / 6, kPi / 4, kPi / 3, kPi / 2}) {
        const auto dir = scratch("sweep");
        ExperimentConfig c;
        c.theta = theta;
        c.n_boundary = 64;
        c.output_dir = dir;
        sweep.push_back(run_experiment(c));
        fs::remove_all(dir);
    }
    for (const auto& s : sweep) {
        const auto r = iteration_ratio(s);
        ASSERT_TRUE(r.has_value());
        EXPECT_LE(*r, 1.0) << "theta=" << s.theta;
    }
    EXPECT_FALSE(compare_report(sweep).empty());
}

}  // namespace
}  // namespace cauchy
