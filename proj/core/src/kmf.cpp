#include "cauchy/kmf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include "cauchy/errors.hpp"

namespace cauchy {

void KmfOptions::validate() const {
    if (!(tol_E > 0.0)) throw ConfigError("tol_E must be positive");
    if (max_iters < 1) throw ConfigError("max_iters must be at least 1");
    if (!(relaxation_omega > 0.0 && relaxation_omega <= 2.0))
        throw ConfigError("relaxation omega must lie in (0, 2]");
}

BoundaryField relax(const BoundaryField& new_field, const BoundaryField& old_field, double omega) {
    if (!new_field.compatible_with(old_field))
        throw ConfigError("relax: fields live on different boundary nodes");
    if (!(omega > 0.0 && omega <= 2.0)) throw ConfigError("relax: omega must lie in (0, 2]");
    BoundaryField out = new_field;
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = omega * new_field.values[k] + (1.0 - omega) * old_field.values[k];
    return out;
}

BoundaryField perturb(const BoundaryField& field, double noise_level, std::uint64_t seed) {
    if (!(noise_level >= 0.0)) throw ConfigError("noise level must be non-negative");
    BoundaryField out = field;
    if (noise_level == 0.0 || field.values.empty()) return out;
    double scale = 0.0;
    for (double v : field.values) scale = std::max(scale, std::abs(v));
    scale *= noise_level;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& v : out.values) v += scale * normal(rng);
    return out;
}

namespace {

void check_inputs(const TriMesh& mesh, const CauchyData& data, const BoundaryField& guess,
                  const KmfOptions& options) {
    options.validate();
    const auto g0 = boundary_nodes(mesh, kGamma0);
    const auto g1 = boundary_nodes(mesh, kGamma1);
    if (g1.empty()) throw ConfigError("mesh has no inaccessible boundary Gamma1");
    if (data.f.label != kGamma0 || data.f.nodes != g0 || data.f.values.size() != g0.size())
        throw ConfigError("Dirichlet datum f must be a field on Gamma0");
    if (data.g.label != kGamma0 || data.g.nodes != g0 || data.g.values.size() != g0.size())
        throw ConfigError("Neumann datum g must be a field on Gamma0");
    if (guess.label != kGamma1 || guess.nodes != g1 || guess.values.size() != g1.size())
        throw ConfigError("initial guess must be a field on Gamma1");
    if (options.exact) {
        const auto& ex = *options.exact;
        if (ex.u.label != kGamma1 || ex.u.nodes != g1 || ex.dudn.label != kGamma1 ||
            ex.dudn.nodes != g1)
            throw ConfigError("exact reference fields must live on Gamma1");
    }
}

BoundaryField extract_flux(const MixedSolution& sol, BoundarySet set, const CsrMatrix& stiffness,
                           FluxMethod method) {
    if (method == FluxMethod::ElementGradient) return gradient_normal_derivative(sol.solution, set);
    return normal_derivative(sol.solution, set, stiffness, sol.load);
}

double error_norm(const BoundaryField& approx, const BoundaryField& exact, const TriMesh& mesh) {
    return l2_boundary_norm(subtract(approx, exact), mesh);
}

// Classical loop shared by the Dirichlet- and Neumann-started variants.
class StandardIteration {
public:
    StandardIteration(const TriMesh& mesh, const CauchyData& data, const KmfOptions& options)
        : mesh_(mesh), data_(data), options_(options), solver_(mesh, options.cg) {}

    // {u = u_g1 on Gamma1, du/dn = g on Gamma0}; returns the flux on Gamma1.
    BoundaryField dirichlet_step(const BoundaryField& u_g1) {
        MixedBVPSpec spec;
        spec.dirichlet(u_g1).neumann(data_.g);
        auto sol = solver_.solve(spec, warm_dirichlet_);
        warm_dirichlet_ = sol.solution.values;
        auto v = extract_flux(sol, kGamma1, solver_.stiffness(), options_.flux);
        last_dirichlet_ = std::move(sol.solution);
        return v;
    }

    // {du/dn = v_g1 on Gamma1, u = f on Gamma0}; returns the trace on Gamma1.
    BoundaryField neumann_step(const BoundaryField& v_g1) {
        MixedBVPSpec spec;
        spec.neumann(v_g1).dirichlet(data_.f);
        auto sol = solver_.solve(spec, warm_neumann_);
        warm_neumann_ = sol.solution.values;
        return trace(sol.solution, kGamma1);
    }

    // Runs from u_1 with v_0 known. `base_solves` counts the solves spent
    // before the first Dirichlet step of iteration 1 beyond the one that
    // produced u_1.
    CompletionResult run(BoundaryField u, BoundaryField v, std::size_t base_solves) {
        CompletionResult result;
        for (std::size_t n = 1;; ++n) {
            BoundaryField v_new = dirichlet_step(u);
            if (options_.relaxation_omega != 1.0) v_new = relax(v_new, v, options_.relaxation_omega);
            v = std::move(v_new);
            BoundaryField u_next = neumann_step(v);

            IterationRecord rec;
            rec.n = n;
            rec.E = error_norm(u, u_next, mesh_);
            rec.solves_so_far = base_solves + 2 * n;
            if (options_.exact) {
                rec.e_u = error_norm(u, options_.exact->u, mesh_);
                rec.e_v = error_norm(v, options_.exact->dudn, mesh_);
            }
            result.history.push_back(rec);
            if (rec.E <= options_.tol_E) {
                result.converged = true;
                break;
            }
            if (n >= options_.max_iters) break;
            u = std::move(u_next);
        }
        result.u_gamma1 = std::move(u);
        result.v_gamma1 = std::move(v);
        result.final_solution = last_dirichlet_;
        return result;
    }

private:
    const TriMesh& mesh_;
    const CauchyData& data_;
    const KmfOptions& options_;
    MixedSolver solver_;
    std::vector<double> warm_dirichlet_;
    std::vector<double> warm_neumann_;
    FemSolution last_dirichlet_;
};

}  // namespace

CompletionResult kmf_standard(const TriMesh& mesh, const CauchyData& data, const BoundaryField& u0,
                              const KmfOptions& options) {
    check_inputs(mesh, data, u0, options);
    StandardIteration it(mesh, data, options);
    BoundaryField v0 = it.dirichlet_step(u0);
    BoundaryField u1 = it.neumann_step(v0);
    return it.run(std::move(u1), std::move(v0), 1);
}

CompletionResult kmf_standard_from_flux(const TriMesh& mesh, const CauchyData& data,
                                        const BoundaryField& v0, const KmfOptions& options) {
    check_inputs(mesh, data, v0, options);
    StandardIteration it(mesh, data, options);
    BoundaryField u1 = it.neumann_step(v0);
    return it.run(std::move(u1), v0, 0);
}

CompletionResult kmf_alternating(const TriMesh& mesh, const CauchyData& data, const BoundaryField& u0,
                                 const KmfOptions& options) {
    check_inputs(mesh, data, u0, options);
    if (boundary_nodes(mesh, kGamma11).empty() || boundary_nodes(mesh, kGamma12).empty())
        throw ConfigError("alternating iteration needs non-empty Gamma1_1 and Gamma1_2");

    MixedSolver solver(mesh, options.cg);
    const auto& stiffness = solver.stiffness();
    const auto f = data.f;
    const auto g = data.g;
    std::array<std::vector<double>, 4> warm;
    FemSolution last_solution;

    auto solve = [&](MixedBVPSpec& spec, std::size_t slot) {
        auto sol = solver.solve(spec, warm[slot]);
        warm[slot] = sol.solution.values;
        return sol;
    };

    // Neumann on both halves, Dirichlet f on Gamma0 -> u1 on Gamma1_1.
    auto solve_u1 = [&](const BoundaryField& v1, const BoundaryField& v2) {
        MixedBVPSpec spec;
        spec.neumann(v1).neumann(v2).dirichlet(f);
        return trace(solve(spec, 0).solution, kGamma11);
    };
    // Dirichlet u1 on Gamma1_1, Neumann v2 on Gamma1_2, f on Gamma0 -> u2.
    auto solve_u2 = [&](const BoundaryField& u1, const BoundaryField& v2) {
        MixedBVPSpec spec;
        spec.dirichlet(u1).neumann(v2).dirichlet(f);
        return trace(solve(spec, 1).solution, kGamma12);
    };
    // Dirichlet on both halves, g on Gamma0 -> v1. Both halves are
    // constrained, so the flux is recovered on all of Gamma1 and restricted.
    auto solve_v1 = [&](const BoundaryField& u1, const BoundaryField& u2) {
        MixedBVPSpec spec;
        spec.dirichlet(u1).dirichlet(u2).neumann(g);
        auto sol = solve(spec, 2);
        auto v = extract_flux(sol, kGamma1, stiffness, options.flux);
        last_solution = std::move(sol.solution);
        return restrict_field(v, mesh, kGamma11);
    };
    // Neumann v1 on Gamma1_1, Dirichlet u2 on Gamma1_2, g on Gamma0 -> v2.
    auto solve_v2 = [&](const BoundaryField& v1, const BoundaryField& u2) {
        MixedBVPSpec spec;
        spec.neumann(v1).dirichlet(u2).neumann(g);
        auto sol = solve(spec, 3);
        return extract_flux(sol, kGamma12, stiffness, options.flux);
    };

    BoundaryField v1, v2;
    {
        MixedBVPSpec spec;
        spec.dirichlet(u0).neumann(g);
        auto sol = solver.solve(spec);
        auto v = extract_flux(sol, kGamma1, stiffness, options.flux);
        v1 = restrict_field(v, mesh, kGamma11);
        v2 = restrict_field(v, mesh, kGamma12);
    }
    BoundaryField u1 = solve_u1(v1, v2);
    BoundaryField u2 = solve_u2(u1, v2);

    const double omega = options.relaxation_omega;
    const ExactGamma1* exact = options.exact ? &*options.exact : nullptr;
    std::optional<BoundaryField> exact_v1, exact_v2;
    if (exact) {
        exact_v1 = restrict_field(exact->dudn, mesh, kGamma11);
        exact_v2 = restrict_field(exact->dudn, mesh, kGamma12);
    }

    CompletionResult result;
    for (std::size_t n = 1;; ++n) {
        BoundaryField v1_new = solve_v1(u1, u2);
        if (omega != 1.0) v1_new = relax(v1_new, v1, omega);
        v1 = std::move(v1_new);
        BoundaryField v2_new = solve_v2(v1, u2);
        if (omega != 1.0) v2_new = relax(v2_new, v2, omega);
        v2 = std::move(v2_new);

        const std::array<BoundaryField, 2> u_pieces{u1, u2};
        BoundaryField u_n = join_fields(mesh, kGamma1, u_pieces);

        BoundaryField u1_next = solve_u1(v1, v2);
        BoundaryField u2_next = solve_u2(u1_next, v2);
        const std::array<BoundaryField, 2> next_pieces{u1_next, u2_next};

        IterationRecord rec;
        rec.n = n;
        rec.E = error_norm(u_n, join_fields(mesh, kGamma1, next_pieces), mesh);
        rec.solves_so_far = 1 + 4 * n;
        if (exact) {
            rec.e_u = error_norm(u_n, exact->u, mesh);
            // The two flux halves may differ at the junction; measure each
            // half on its own segment.
            const double e1 = error_norm(v1, *exact_v1, mesh);
            const double e2 = error_norm(v2, *exact_v2, mesh);
            rec.e_v = std::sqrt(e1 * e1 + e2 * e2);
        }
        result.history.push_back(rec);

        const bool done = rec.E <= options.tol_E;
        if (done || n >= options.max_iters) {
            result.converged = done;
            result.junction_gap = std::abs(u1.values.back() - u2.values.front());
            result.u_gamma1 = std::move(u_n);
            const std::array<BoundaryField, 2> v_pieces{v1, v2};
            result.v_gamma1 = join_fields(mesh, kGamma1, v_pieces);
            break;
        }
        u1 = std::move(u1_next);
        u2 = std::move(u2_next);
    }
    result.final_solution = std::move(last_solution);
    return result;
}

}  // namespace cauchy
