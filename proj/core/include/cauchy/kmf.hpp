#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cauchy/fem.hpp"

namespace cauchy {

/// Over-specified data on the accessible boundary Gamma0: the Dirichlet
/// trace f and the Neumann flux g.
struct CauchyData {
    BoundaryField f;
    BoundaryField g;
};

/// Exact Dirichlet trace and flux on Gamma1, used only to record e_u and e_v
/// on manufactured problems.
struct ExactGamma1 {
    BoundaryField u;
    BoundaryField dudn;
};

struct KmfOptions {
    /// Stop when E = ||u_n - u_{n+1}||_{L2(Gamma1)} <= tol_E.
    double tol_E = 1e-5;
    std::size_t max_iters = 1000;
    /// Relaxation of the Neumann update, omega in (0, 2]; 1 disables it.
    double relaxation_omega = 1.0;
    std::optional<ExactGamma1> exact;
    FluxMethod flux = FluxMethod::Variational;
    CgOptions cg;

    void validate() const;
};

struct IterationRecord {
    std::size_t n = 0;
    double E = 0.0;
    std::optional<double> e_u;
    std::optional<double> e_v;
    /// Mixed solves performed up to and including iterate n (excludes the
    /// look-ahead solve used to evaluate E).
    std::size_t solves_so_far = 0;
};

struct CompletionResult {
    /// Recovered Dirichlet and Neumann data on Gamma1 at the last iteration.
    BoundaryField u_gamma1;
    BoundaryField v_gamma1;
    std::vector<IterationRecord> history;
    bool converged = false;
    /// Last solution producing the Neumann update (problem with Dirichlet
    /// data on Gamma1).
    FemSolution final_solution;
    /// Alternating driver only: |u1 - u2| at the node shared by Gamma1_1 and
    /// Gamma1_2 in the last iterate.
    double junction_gap = 0.0;

    [[nodiscard]] std::size_t iterations() const noexcept { return history.size(); }
};

/// Classical alternating iteration. Starting from a Dirichlet guess u0 on
/// Gamma1:
///   v_0     = flux on Gamma1 of {u = u0 on Gamma1, du/dn = g on Gamma0}
///   u_n     = trace on Gamma1 of {du/dn = v_{n-1} on Gamma1, u = f on Gamma0}
///   v_n     = flux on Gamma1 of {u = u_n on Gamma1, du/dn = g on Gamma0}
/// Two solves per iteration plus the initial one.
[[nodiscard]] CompletionResult kmf_standard(const TriMesh& mesh, const CauchyData& data,
                                            const BoundaryField& u0, const KmfOptions& options);

/// Same iteration started from a Neumann guess v0 on Gamma1 (the initial
/// Dirichlet-data solve is skipped, so iterate n costs 2n solves).
[[nodiscard]] CompletionResult kmf_standard_from_flux(const TriMesh& mesh,
                                                      const CauchyData& data,
                                                      const BoundaryField& v0,
                                                      const KmfOptions& options);

/// Split iteration on Gamma1 = Gamma1_1 U Gamma1_2. After the initial solve
/// {u = u0 on Gamma1, du/dn = g on Gamma0} gives (v1, v2), every iteration
/// runs four solves:
///   u1 <- trace Gamma1_1 of {dn = v1 on G11, dn = v2 on G12, u = f on G0}
///   u2 <- trace Gamma1_2 of {u = u1 on G11,  dn = v2 on G12, u = f on G0}
///   v1 <- flux  Gamma1_1 of {u = u1 on G11,  u = u2 on G12,  dn = g on G0}
///   v2 <- flux  Gamma1_2 of {dn = v1 on G11, u = u2 on G12,  dn = g on G0}
/// Throws ConfigError when either half of Gamma1 is empty.
[[nodiscard]] CompletionResult kmf_alternating(const TriMesh& mesh, const CauchyData& data,
                                               const BoundaryField& u0,
                                               const KmfOptions& options);

/// omega * new + (1 - omega) * old.
[[nodiscard]] BoundaryField relax(const BoundaryField& new_field, const BoundaryField& old_field,
                                  double omega);

/// Adds noise_level * max|values| * xi_i with xi_i standard normal drawn from
/// a generator seeded with `seed`.
[[nodiscard]] BoundaryField perturb(const BoundaryField& field, double noise_level,
                                    std::uint64_t seed);

}  // namespace cauchy
