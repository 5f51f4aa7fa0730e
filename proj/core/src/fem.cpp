#include "cauchy/fem.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "cauchy/errors.hpp"

namespace cauchy {

namespace {

// Calls fn(i, j, length) for every edge of the chain of `set`, where i and j
// are positions in boundary_nodes(mesh, set).
template <typename Fn>
void for_each_chain_edge(const TriMesh& mesh, BoundarySet set, Fn&& fn) {
    const auto chain = boundary_chain(mesh, set);
    const bool closed = chain.size() == mesh.boundary_edges().size() && !chain.empty();
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const auto& p = mesh.vertex(chain[k].a);
        const auto& q = mesh.vertex(chain[k].b);
        const std::size_t next = closed ? (k + 1) % chain.size() : k + 1;
        fn(k, next, std::hypot(q.x - p.x, q.y - p.y));
    }
}

void require_on_mesh(const BoundaryField& field, const TriMesh& mesh, const char* what) {
    if (field.values.size() != field.nodes.size())
        throw ConfigError(std::string(what) + ": field has " + std::to_string(field.values.size()) +
                          " values for " + std::to_string(field.nodes.size()) + " nodes");
    if (field.nodes != boundary_nodes(mesh, field.label))
        throw ConfigError(std::string(what) + ": field nodes do not match boundary set " +
                          to_string(field.label));
}

}  // namespace

BoundaryField make_boundary_field(const TriMesh& mesh, BoundarySet set, std::vector<double> values) {
    BoundaryField f{set, boundary_nodes(mesh, set), std::move(values)};
    if (f.values.size() != f.nodes.size())
        throw ConfigError("boundary field on " + to_string(set) + " needs " +
                          std::to_string(f.nodes.size()) + " values, got " +
                          std::to_string(f.values.size()));
    return f;
}

BoundaryField constant_boundary_field(const TriMesh& mesh, BoundarySet set, double value) {
    auto nodes = boundary_nodes(mesh, set);
    std::vector<double> values(nodes.size(), value);
    return {set, std::move(nodes), std::move(values)};
}

BoundaryField interpolate_boundary(const std::function<double(double, double)>& fn,
                                   const TriMesh& mesh, BoundarySet set) {
    BoundaryField f{set, boundary_nodes(mesh, set), {}};
    f.values.reserve(f.nodes.size());
    for (Index i : f.nodes) {
        const auto& p = mesh.vertex(i);
        f.values.push_back(fn(p.x, p.y));
    }
    return f;
}

BoundaryField restrict_field(const BoundaryField& field, const TriMesh& mesh, BoundarySet subset) {
    if (!field.label.includes(subset))
        throw ConfigError("cannot restrict a field on " + to_string(field.label) + " to " +
                          to_string(subset));
    std::unordered_map<Index, double> lookup;
    for (std::size_t k = 0; k < field.nodes.size(); ++k) lookup.emplace(field.nodes[k], field.values[k]);
    BoundaryField out{subset, boundary_nodes(mesh, subset), {}};
    out.values.reserve(out.nodes.size());
    for (Index i : out.nodes) out.values.push_back(lookup.at(i));
    return out;
}

BoundaryField join_fields(const TriMesh& mesh, BoundarySet set, std::span<const BoundaryField> pieces) {
    std::unordered_map<Index, std::pair<double, int>> acc;
    for (const auto& piece : pieces) {
        for (std::size_t k = 0; k < piece.nodes.size(); ++k) {
            auto& [sum, count] = acc[piece.nodes[k]];
            sum += piece.values[k];
            ++count;
        }
    }
    BoundaryField out{set, boundary_nodes(mesh, set), {}};
    out.values.reserve(out.nodes.size());
    for (Index i : out.nodes) {
        const auto it = acc.find(i);
        if (it == acc.end())
            throw ConfigError("pieces do not cover node " + std::to_string(i) + " of " +
                              to_string(set));
        out.values.push_back(it->second.first / it->second.second);
    }
    return out;
}

BoundaryField subtract(const BoundaryField& a, const BoundaryField& b) {
    if (!a.compatible_with(b)) throw ConfigError("subtracting incompatible boundary fields");
    BoundaryField out = a;
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] -= b.values[k];
    return out;
}

double l2_boundary_norm(const BoundaryField& field, const TriMesh& mesh) {
    require_on_mesh(field, mesh, "l2_boundary_norm");
    double sum = 0.0;
    const auto& v = field.values;
    for_each_chain_edge(mesh, field.label, [&](std::size_t i, std::size_t j, double len) {
        sum += len / 3.0 * (v[i] * v[i] + v[j] * v[j] + v[i] * v[j]);
    });
    return std::sqrt(std::max(0.0, sum));
}

CsrMatrix boundary_mass_matrix(const TriMesh& mesh, BoundarySet set) {
    const auto n = boundary_nodes(mesh, set).size();
    std::vector<Triplet> entries;
    for_each_chain_edge(mesh, set, [&](std::size_t i, std::size_t j, double len) {
        entries.push_back({i, i, len / 3.0});
        entries.push_back({j, j, len / 3.0});
        entries.push_back({i, j, len / 6.0});
        entries.push_back({j, i, len / 6.0});
    });
    return CsrMatrix::from_triplets(n, entries);
}

std::array<std::array<double, 3>, 3> local_stiffness(const Point2& p0, const Point2& p1,
                                                     const Point2& p2) {
    const double area = signed_area(p0, p1, p2);
    if (!(area > 0.0))
        throw ValidationError("degenerate or clockwise triangle in stiffness assembly");
    const std::array<const Point2*, 3> p{&p0, &p1, &p2};
    std::array<std::array<double, 2>, 3> grad{};
    for (int i = 0; i < 3; ++i) {
        const auto& pj = *p[(i + 1) % 3];
        const auto& pk = *p[(i + 2) % 3];
        grad[i] = {(pj.y - pk.y) / (2.0 * area), (pk.x - pj.x) / (2.0 * area)};
    }
    std::array<std::array<double, 3>, 3> k{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            k[i][j] = area * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
    return k;
}

CsrMatrix assemble_stiffness(const TriMesh& mesh) {
    std::vector<Triplet> entries;
    entries.reserve(mesh.num_triangles() * 9);
    for (const auto& tri : mesh.triangles()) {
        const auto k = local_stiffness(mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2]));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) entries.push_back({tri[i], tri[j], k[i][j]});
    }
    return CsrMatrix::from_triplets(mesh.num_vertices(), entries);
}

std::vector<double> assemble_neumann_load(const TriMesh& mesh, BoundarySet label,
                                          const BoundaryField& g) {
    if (g.label != label)
        throw ConfigError("Neumann datum is on " + to_string(g.label) + ", expected " +
                          to_string(label));
    require_on_mesh(g, mesh, "assemble_neumann_load");
    std::vector<double> load(mesh.num_vertices(), 0.0);
    const auto& v = g.values;
    for_each_chain_edge(mesh, label, [&](std::size_t i, std::size_t j, double len) {
        load[g.nodes[i]] += len / 6.0 * (2.0 * v[i] + v[j]);
        load[g.nodes[j]] += len / 6.0 * (v[i] + 2.0 * v[j]);
    });
    return load;
}

MixedBVPSpec& MixedBVPSpec::dirichlet(BoundaryField values) {
    conditions_.push_back({BcKind::Dirichlet, std::move(values)});
    return *this;
}

MixedBVPSpec& MixedBVPSpec::neumann(BoundaryField flux) {
    conditions_.push_back({BcKind::Neumann, std::move(flux)});
    return *this;
}

void MixedBVPSpec::validate(const TriMesh& mesh) const {
    std::array<int, 3> coverage{};
    bool has_dirichlet = false;
    for (const auto& c : conditions_) {
        require_on_mesh(c.data, mesh, "mixed BVP condition");
        for (auto label : kAllLabels)
            if (c.data.label.contains(label)) ++coverage[static_cast<std::size_t>(label)];
        if (c.kind == BcKind::Dirichlet && !c.data.nodes.empty()) has_dirichlet = true;
    }
    for (auto label : kAllLabels) {
        const bool present = boundary_measure(mesh, label) > 0.0;
        const int count = coverage[static_cast<std::size_t>(label)];
        if (count > 1)
            throw ConfigError("segment " + std::string(to_string(label)) + " assigned " +
                              std::to_string(count) + " conditions");
        if (present && count == 0)
            throw ConfigError("segment " + std::string(to_string(label)) + " has no condition");
    }
    if (!has_dirichlet)
        throw ConfigError("mixed problem needs a Dirichlet segment (pure Neumann is singular)");
}

MixedSolver::MixedSolver(const TriMesh& mesh, CgOptions options)
    : mesh_(&mesh), options_(options), stiffness_(assemble_stiffness(mesh)) {}

MixedSolution MixedSolver::solve(const MixedBVPSpec& spec, std::span<const double> initial_guess) {
    const auto& mesh = *mesh_;
    spec.validate(mesh);
    const std::size_t n = mesh.num_vertices();
    if (!initial_guess.empty() && initial_guess.size() != n)
        throw ConfigError("initial guess must cover every vertex");

    MixedSolution out;
    out.load.assign(n, 0.0);
    out.constrained.assign(n, false);
    std::vector<double> u(n, 0.0);
    std::vector<int> hits(n, 0);
    for (const auto& c : spec.conditions()) {
        if (c.kind == BcKind::Neumann) {
            const auto load = assemble_neumann_load(mesh, c.data.label, c.data);
            for (std::size_t i = 0; i < n; ++i) out.load[i] += load[i];
        } else {
            for (std::size_t k = 0; k < c.data.nodes.size(); ++k) {
                const Index i = c.data.nodes[k];
                u[i] += c.data.values[k];
                ++hits[i];
                out.constrained[i] = true;
            }
        }
    }
    // Two Dirichlet segments meeting at a node: use the mean of their values.
    for (std::size_t i = 0; i < n; ++i)
        if (hits[i] > 1) u[i] /= hits[i];

    auto it = reduced_cache_.find(out.constrained);
    if (it == reduced_cache_.end()) {
        Reduced r;
        for (std::size_t i = 0; i < n; ++i)
            if (!out.constrained[i]) r.free_nodes.push_back(i);
        r.matrix = stiffness_.principal_submatrix(r.free_nodes);
        it = reduced_cache_.emplace(out.constrained, std::move(r)).first;
    }
    const auto& reduced = it->second;

    if (!reduced.free_nodes.empty()) {
        const auto ku = stiffness_.multiply(u);
        std::vector<double> rhs(reduced.free_nodes.size());
        std::vector<double> guess;
        for (std::size_t k = 0; k < rhs.size(); ++k) {
            const auto i = reduced.free_nodes[k];
            rhs[k] = out.load[i] - ku[i];
        }
        if (!initial_guess.empty()) {
            guess.resize(rhs.size());
            for (std::size_t k = 0; k < rhs.size(); ++k) guess[k] = initial_guess[reduced.free_nodes[k]];
        }
        auto cg = conjugate_gradient(reduced.matrix, rhs, options_, guess);
        out.report = cg.report;
        if (!cg.report.converged)
            throw SolverError("CG did not converge: relative residual " +
                                  std::to_string(cg.report.relative_residual) + " after " +
                                  std::to_string(cg.report.iterations) + " iterations",
                              cg.report);
        for (std::size_t k = 0; k < rhs.size(); ++k) u[reduced.free_nodes[k]] = cg.x[k];
    } else {
        out.report = {0, 0.0, true};
    }
    out.solution = {&mesh, std::move(u)};
    return out;
}

MixedSolution solve_mixed_bvp(const TriMesh& mesh, const MixedBVPSpec& spec) {
    MixedSolver solver(mesh);
    return solver.solve(spec);
}

BoundaryField trace(const FemSolution& sol, BoundarySet set) {
    if (sol.mesh == nullptr) throw ConfigError("solution has no mesh");
    BoundaryField f{set, boundary_nodes(*sol.mesh, set), {}};
    f.values.reserve(f.nodes.size());
    for (Index i : f.nodes) f.values.push_back(sol.values.at(i));
    return f;
}

std::vector<double> flux_weights(const FemSolution& sol, const CsrMatrix& stiffness,
                                 std::span<const double> load) {
    if (sol.values.size() != stiffness.size() || load.size() != stiffness.size())
        throw ConfigError("flux_weights: size mismatch");
    auto r = stiffness.multiply(sol.values);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= load[i];
    return r;
}

BoundaryField normal_derivative(const FemSolution& sol, BoundarySet set, const CsrMatrix& stiffness,
                                std::span<const double> load) {
    if (sol.mesh == nullptr) throw ConfigError("solution has no mesh");
    const auto& mesh = *sol.mesh;
    BoundaryField out{set, boundary_nodes(mesh, set), {}};
    if (out.nodes.empty())
        throw ConfigError("normal derivative on empty boundary set " + to_string(set));
    const auto weights = flux_weights(sol, stiffness, load);
    std::vector<double> rhs(out.nodes.size());
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = weights[out.nodes[k]];
    const auto mass = boundary_mass_matrix(mesh, set);
    auto cg = conjugate_gradient(mass, rhs, {1e-14, 20 * rhs.size() + 20});
    if (!cg.report.converged)
        throw SolverError("boundary mass solve did not converge", cg.report);
    out.values = std::move(cg.x);
    return out;
}

BoundaryField gradient_normal_derivative(const FemSolution& sol, BoundarySet set) {
    if (sol.mesh == nullptr) throw ConfigError("solution has no mesh");
    const auto& mesh = *sol.mesh;
    BoundaryField out{set, boundary_nodes(mesh, set), {}};
    if (out.nodes.empty())
        throw ConfigError("normal derivative on empty boundary set " + to_string(set));

    // Owning triangle of each directed boundary edge.
    std::unordered_map<std::uint64_t, std::size_t> owner;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles()[t];
        for (int k = 0; k < 3; ++k)
            owner.emplace((std::uint64_t{tri[k]} << 32) | tri[(k + 1) % 3], t);
    }

    const auto chain = boundary_chain(mesh, set);
    std::vector<double> rhs(out.nodes.size(), 0.0);
    const bool closed = chain.size() == mesh.boundary_edges().size();
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const auto& e = chain[k];
        const auto& tri = mesh.triangles()[owner.at((std::uint64_t{e.a} << 32) | e.b)];
        const auto& p0 = mesh.vertex(tri[0]);
        const auto& p1 = mesh.vertex(tri[1]);
        const auto& p2 = mesh.vertex(tri[2]);
        const double two_area = 2.0 * signed_area(p0, p1, p2);
        const double u0 = sol.values[tri[0]], u1 = sol.values[tri[1]], u2 = sol.values[tri[2]];
        const double gx = (u0 * (p1.y - p2.y) + u1 * (p2.y - p0.y) + u2 * (p0.y - p1.y)) / two_area;
        const double gy = (u0 * (p2.x - p1.x) + u1 * (p0.x - p2.x) + u2 * (p1.x - p0.x)) / two_area;
        const auto& a = mesh.vertex(e.a);
        const auto& b = mesh.vertex(e.b);
        // Outward normal of a counter-clockwise boundary edge, times its length.
        const double nx = b.y - a.y, ny = a.x - b.x;
        const double flux_times_len = gx * nx + gy * ny;
        const std::size_t next = closed ? (k + 1) % chain.size() : k + 1;
        rhs[k] += 0.5 * flux_times_len;
        rhs[next] += 0.5 * flux_times_len;
    }
    const auto mass = boundary_mass_matrix(mesh, set);
    auto cg = conjugate_gradient(mass, rhs, {1e-14, 20 * rhs.size() + 20});
    if (!cg.report.converged)
        throw SolverError("boundary mass solve did not converge", cg.report);
    out.values = std::move(cg.x);
    return out;
}

}  // namespace cauchy
