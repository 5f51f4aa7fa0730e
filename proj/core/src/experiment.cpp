#include "cauchy/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numbers>
#include <sstream>
#include <string>

#include "cauchy/errors.hpp"

namespace cauchy {

namespace {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt12(*v) : std::string(); }

double parse_number(std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end)
        throw ConfigError("cannot parse number '" + std::string(text) + "'");
    return v;
}

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void write_history(const std::filesystem::path& path, const CompletionResult& result) {
    auto out = open_csv(path);
    out << "n,E,e_u,e_v,solves\n";
    for (const auto& r : result.history)
        out << r.n << ',' << fmt12(r.E) << ',' << fmt_opt(r.e_u) << ',' << fmt_opt(r.e_v) << ','
            << r.solves_so_far << '\n';
}

struct TimedRun {
    CompletionResult result;
    double seconds = 0.0;
};

TimedRun timed(Algorithm algorithm, const Section5Problem& problem, const KmfOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    TimedRun run;
    run.result = algorithm == Algorithm::Standard
                     ? kmf_standard(problem.mesh, problem.data, problem.u0, options)
                     : kmf_alternating(problem.mesh, problem.data, problem.u0, options);
    run.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

}  // namespace

std::string_view to_string(Algorithm algorithm) noexcept {
    switch (algorithm) {
        case Algorithm::Standard: return "standard";
        case Algorithm::Alternating: return "alternating";
        case Algorithm::Both: return "both";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view text) {
    if (text == "standard") return Algorithm::Standard;
    if (text == "alternating") return Algorithm::Alternating;
    if (text == "both") return Algorithm::Both;
    throw ConfigError("unknown algorithm '" + std::string(text) +
                      "' (expected standard, alternating or both)");
}

double parse_angle(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    const auto pi_pos = s.find("pi");
    if (pi_pos == std::string::npos) return parse_number(s);

    std::string_view coef(s.data(), pi_pos);
    if (!coef.empty() && coef.back() == '*') coef.remove_suffix(1);
    std::string_view rest(s.data() + pi_pos + 2, s.size() - pi_pos - 2);
    double value = std::numbers::pi * (coef.empty() ? 1.0 : parse_number(coef));
    if (!rest.empty()) {
        if (rest.front() != '/') throw ConfigError("cannot parse angle '" + std::string(text) + "'");
        const double den = parse_number(rest.substr(1));
        if (den == 0.0) throw ConfigError("angle divides by zero");
        value /= den;
    }
    return value;
}

void ExperimentConfig::validate() const {
    if (!mesh_file) {
        if (!(theta > 0.0 && theta < 2.0 * std::numbers::pi))
            throw ConfigError("theta must lie in (0, 2*pi)");
        if (n_boundary < 8) throw ConfigError("n_boundary must be at least 8");
    }
    if (!(noise_level >= 0.0)) throw ConfigError("noise level must be non-negative");
    if (!(tol_E > 0.0)) throw ConfigError("tolerance must be positive");
    if (max_iters < 1) throw ConfigError("max_iters must be at least 1");
    if (!(omega > 0.0 && omega <= 2.0)) throw ConfigError("omega must lie in (0, 2]");
}

double exact_solution(double x, double y) noexcept { return x * x - y * y; }

double exact_flux(double x, double y) noexcept {
    // grad u . n with n = (x, y) / r; equals 2(2x^2 - 1) on the unit circle.
    const double r = std::hypot(x, y);
    return 2.0 * (x * x - y * y) / r;
}

double initial_guess(double x, double /*y*/) noexcept { return x * x - x - 0.5; }

Section5Problem build_section5_problem(const ExperimentConfig& config) {
    config.validate();
    TriMesh mesh = config.mesh_file ? read_mesh(*config.mesh_file)
                                    : generate_disk_mesh(config.n_boundary, config.theta);
    CauchyData data{interpolate_boundary(exact_solution, mesh, kGamma0),
                    interpolate_boundary(exact_flux, mesh, kGamma0)};
    if (config.noise_level > 0.0) {
        data.f = perturb(data.f, config.noise_level, config.seed);
        data.g = perturb(data.g, config.noise_level, config.seed + 0x9e3779b97f4a7c15ULL);
    }
    BoundaryField u0 = interpolate_boundary(initial_guess, mesh, kGamma1);
    ExactGamma1 exact{interpolate_boundary(exact_solution, mesh, kGamma1),
                      interpolate_boundary(exact_flux, mesh, kGamma1)};
    return {std::move(mesh), std::move(data), std::move(u0), std::move(exact)};
}

const AlgorithmSummary* RunSummary::find(Algorithm algorithm) const noexcept {
    for (const auto& r : runs)
        if (r.algorithm == algorithm) return &r;
    return nullptr;
}

bool RunSummary::all_converged() const noexcept {
    return std::all_of(runs.begin(), runs.end(), [](const auto& r) { return r.converged; });
}

AlgorithmSummary summarize(Algorithm algorithm, const CompletionResult& result, double wall_seconds) {
    AlgorithmSummary s;
    s.algorithm = algorithm;
    s.converged = result.converged;
    s.wall_seconds = wall_seconds;
    if (!result.history.empty()) {
        const auto& last = result.history.back();
        s.iterations = last.n;
        s.total_solves = last.solves_so_far;
        s.final_E = last.E;
        s.final_e_u = last.e_u.value_or(std::nan(""));
        s.final_e_v = last.e_v.value_or(std::nan(""));
    }
    return s;
}

RunSummary run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto& dir = config.output_dir;
    {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
        const auto probe = dir / ".write_probe";
        {
            std::ofstream out(probe);
            if (!out) throw IoError("output directory " + dir.string() + " is not writable");
        }
        std::filesystem::remove(probe, ec);
    }

    const Section5Problem problem = build_section5_problem(config);
    KmfOptions options;
    options.tol_E = config.tol_E;
    options.max_iters = config.max_iters;
    options.relaxation_omega = config.omega;
    options.exact = problem.exact;

    const bool want_std = config.algorithm != Algorithm::Alternating;
    const bool want_alt = config.algorithm != Algorithm::Standard;
    // The two drivers share only immutable inputs.
    std::future<TimedRun> alt_future;
    if (want_alt)
        alt_future = std::async(std::launch::async, timed, Algorithm::Alternating,
                                std::cref(problem), std::cref(options));
    std::optional<TimedRun> std_run;
    if (want_std) std_run = timed(Algorithm::Standard, problem, options);
    std::optional<TimedRun> alt_run;
    if (want_alt) alt_run = alt_future.get();

    RunSummary summary;
    summary.theta = problem.mesh.theta().value_or(config.theta);
    summary.n_boundary = static_cast<int>(problem.mesh.boundary_edges().size());
    if (std_run) {
        write_history(dir / "standard.csv", std_run->result);
        summary.runs.push_back(summarize(Algorithm::Standard, std_run->result, std_run->seconds));
    }
    if (alt_run) {
        write_history(dir / "alternating.csv", alt_run->result);
        summary.runs.push_back(summarize(Algorithm::Alternating, alt_run->result, alt_run->seconds));
    }

    {
        auto out = open_csv(dir / "trace.csv");
        out << "t,u_exact,u0,u_standard,u_alternating\n";
        const auto& nodes = problem.exact.u.nodes;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            out << fmt12(polar_angle(problem.mesh.vertex(nodes[k]))) << ','
                << fmt12(problem.exact.u.values[k]) << ',' << fmt12(problem.u0.values[k]) << ','
                << (std_run ? fmt12(std_run->result.u_gamma1.values[k]) : std::string()) << ','
                << (alt_run ? fmt12(alt_run->result.u_gamma1.values[k]) : std::string()) << '\n';
        }
    }

    {
        // Wall time is left out so identical configs give identical files.
        auto out = open_csv(dir / "summary.csv");
        out << "algorithm,theta,n_boundary,iterations,total_solves,converged,E,e_u,e_v\n";
        for (const auto& r : summary.runs)
            out << to_string(r.algorithm) << ',' << fmt12(summary.theta) << ',' << summary.n_boundary
                << ',' << r.iterations << ',' << r.total_solves << ',' << (r.converged ? 1 : 0)
                << ',' << fmt12(r.final_E) << ',' << fmt12(r.final_e_u) << ','
                << fmt12(r.final_e_v) << '\n';
    }
    return summary;
}

std::string format_summary(const RunSummary& summary) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "theta = %.6f rad, n_boundary = %d\n", summary.theta,
                  summary.n_boundary);
    out << line;
    std::snprintf(line, sizeof line, "%-12s %6s %7s %5s %12s %12s %12s %9s\n", "algorithm", "iters",
                  "solves", "conv", "E", "e_u", "e_v", "time[s]");
    out << line;
    for (const auto& r : summary.runs) {
        std::snprintf(line, sizeof line, "%-12s %6zu %7zu %5s %12.4e %12.4e %12.4e %9.3f\n",
                      std::string(to_string(r.algorithm)).c_str(), r.iterations, r.total_solves,
                      r.converged ? "yes" : "no", r.final_E, r.final_e_u, r.final_e_v,
                      r.wall_seconds);
        out << line;
    }
    return out.str();
}

std::optional<double> iteration_ratio(const RunSummary& summary) {
    const auto* s = summary.find(Algorithm::Standard);
    const auto* a = summary.find(Algorithm::Alternating);
    if (!s || !a || s->iterations == 0) return std::nullopt;
    return static_cast<double>(a->iterations) / static_cast<double>(s->iterations);
}

std::string compare_report(const std::vector<RunSummary>& summaries) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%10s %6s %9s %9s %10s %12s %12s %10s\n", "theta", "nb",
                  "iters_std", "iters_alt", "iter_ratio", "e_u_std", "e_u_alt", "e_u_ratio");
    out << line;
    for (const auto& s : summaries) {
        const auto* st = s.find(Algorithm::Standard);
        const auto* al = s.find(Algorithm::Alternating);
        auto count = [](const AlgorithmSummary* r) {
            return r ? std::to_string(r->iterations) : std::string("-");
        };
        auto err = [](const AlgorithmSummary* r) {
            if (!r) return std::string("-");
            char b[32];
            std::snprintf(b, sizeof b, "%.4e", r->final_e_u);
            return std::string(b);
        };
        std::string ratio = "-";
        if (const auto r = iteration_ratio(s)) {
            char b[32];
            std::snprintf(b, sizeof b, "%.3f", *r);
            ratio = b;
        }
        std::string err_ratio = "-";
        if (st && al && st->final_e_u > 0.0) {
            char b[32];
            std::snprintf(b, sizeof b, "%.3f", al->final_e_u / st->final_e_u);
            err_ratio = b;
        }
        std::snprintf(line, sizeof line, "%10.6f %6d %9s %9s %10s %12s %12s %10s\n", s.theta,
                      s.n_boundary, count(st).c_str(), count(al).c_str(), ratio.c_str(),
                      err(st).c_str(), err(al).c_str(), err_ratio.c_str());
        out << line;
    }
    return out.str();
}

}  // namespace cauchy
