#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cauchy/kmf.hpp"

namespace cauchy {

enum class Algorithm { Standard, Alternating, Both };

std::string_view to_string(Algorithm algorithm) noexcept;
[[nodiscard]] Algorithm parse_algorithm(std::string_view text);

/// Parses "pi/6", "2*pi/3", "pi", or a plain number of radians.
[[nodiscard]] double parse_angle(std::string_view text);

struct ExperimentConfig {
    double theta = 0.0;
    int n_boundary = 128;
    Algorithm algorithm = Algorithm::Both;
    double tol_E = 1e-5;
    std::size_t max_iters = 1000;
    double noise_level = 0.0;
    std::uint64_t seed = 0;
    double omega = 1.0;
    std::filesystem::path output_dir;
    /// Load the mesh from a file instead of generating a disk.
    std::optional<std::filesystem::path> mesh_file;

    void validate() const;
};

/// Manufactured disk problem with exact solution u = x^2 - y^2.
struct Section5Problem {
    TriMesh mesh;
    CauchyData data;
    BoundaryField u0;
    ExactGamma1 exact;
};

double exact_solution(double x, double y) noexcept;
/// Outward normal derivative of the exact solution on the unit circle.
double exact_flux(double x, double y) noexcept;
double initial_guess(double x, double y) noexcept;

[[nodiscard]] Section5Problem build_section5_problem(const ExperimentConfig& config);

struct AlgorithmSummary {
    Algorithm algorithm = Algorithm::Standard;
    std::size_t iterations = 0;
    std::size_t total_solves = 0;
    bool converged = false;
    double final_E = 0.0;
    double final_e_u = 0.0;
    double final_e_v = 0.0;
    double wall_seconds = 0.0;
};

struct RunSummary {
    double theta = 0.0;
    int n_boundary = 0;
    std::vector<AlgorithmSummary> runs;

    [[nodiscard]] const AlgorithmSummary* find(Algorithm algorithm) const noexcept;
    [[nodiscard]] bool all_converged() const noexcept;
};

/// Summary built from the last iteration record of a completion run.
[[nodiscard]] AlgorithmSummary summarize(Algorithm algorithm, const CompletionResult& result,
                                         double wall_seconds);

/// Runs the requested algorithm(s) and writes into config.output_dir:
///   standard.csv / alternating.csv   n,E,e_u,e_v,solves
///   trace.csv                        t,u_exact,u0,u_standard,u_alternating
///   summary.csv                      one row per algorithm
/// Throws IoError before any solve when the directory cannot be written.
RunSummary run_experiment(const ExperimentConfig& config);

/// Aligned text rendering of one run.
[[nodiscard]] std::string format_summary(const RunSummary& summary);

/// One row per summary: iteration ratio alternating/standard and final e_u
/// ratio. Missing algorithms show as "-".
[[nodiscard]] std::string compare_report(const std::vector<RunSummary>& summaries);

/// Iteration ratio alternating/standard, if both ran.
[[nodiscard]] std::optional<double> iteration_ratio(const RunSummary& summary);

}  // namespace cauchy
