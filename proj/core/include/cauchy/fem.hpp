#pragma once

#include <array>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "cauchy/errors.hpp"
#include "cauchy/mesh.hpp"
#include "cauchy/sparse.hpp"

namespace cauchy {

/// Nodal values of a piecewise-linear function on one labeled boundary
/// chain. `nodes` always equals boundary_nodes(mesh, label).
struct BoundaryField {
    BoundarySet label;
    std::vector<Index> nodes;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    /// Same label and node list.
    [[nodiscard]] bool compatible_with(const BoundaryField& other) const noexcept {
        return label == other.label && nodes == other.nodes;
    }
};

/// Field on `set` with the given values; throws ConfigError on a size mismatch.
[[nodiscard]] BoundaryField make_boundary_field(const TriMesh& mesh, BoundarySet set,
                                                std::vector<double> values);

/// Constant field on `set`.
[[nodiscard]] BoundaryField constant_boundary_field(const TriMesh& mesh, BoundarySet set,
                                                    double value);

/// Nodal sampling of `fn` at the boundary nodes of `set`.
[[nodiscard]] BoundaryField interpolate_boundary(const std::function<double(double, double)>& fn,
                                                 const TriMesh& mesh, BoundarySet set);

/// Restriction of a field to a sub-chain of its label.
[[nodiscard]] BoundaryField restrict_field(const BoundaryField& field, const TriMesh& mesh,
                                           BoundarySet subset);

/// Field on `set` assembled from pieces covering it. Nodes present in more
/// than one piece (junctions) receive the mean of the piece values.
[[nodiscard]] BoundaryField join_fields(const TriMesh& mesh, BoundarySet set,
                                        std::span<const BoundaryField> pieces);

/// a - b, componentwise; fields must be compatible.
[[nodiscard]] BoundaryField subtract(const BoundaryField& a, const BoundaryField& b);

/// Exact L2 norm on the boundary chain of a piecewise-linear field, using the
/// edge mass matrix (L/3 on the diagonal, L/6 off it).
[[nodiscard]] double l2_boundary_norm(const BoundaryField& field, const TriMesh& mesh);

/// Boundary mass matrix of the chain of `set`, indexed by position in
/// boundary_nodes(mesh, set).
[[nodiscard]] CsrMatrix boundary_mass_matrix(const TriMesh& mesh, BoundarySet set);

/// Element stiffness matrix of a P1 triangle, integral of grad(phi_i).grad(phi_j).
/// Throws ValidationError for a degenerate or clockwise triangle.
[[nodiscard]] std::array<std::array<double, 3>, 3> local_stiffness(const Point2& p0,
                                                                  const Point2& p1,
                                                                  const Point2& p2);

/// Global P1 stiffness matrix of the Laplacian.
[[nodiscard]] CsrMatrix assemble_stiffness(const TriMesh& mesh);

/// Vector over all vertices holding the integral of g * phi_i over the edges of
/// g.label, computed exactly for piecewise-linear g.
[[nodiscard]] std::vector<double> assemble_neumann_load(const TriMesh& mesh, BoundarySet label,
                                                        const BoundaryField& g);

enum class BcKind { Dirichlet, Neumann };

struct BoundaryCondition {
    BcKind kind = BcKind::Dirichlet;
    BoundaryField data;
};

/// One well-posed mixed Laplace problem: each labeled segment of the mesh
/// gets exactly one condition, and at least one condition is Dirichlet.
/// A condition may cover a union of segments (for instance all of Gamma1).
class MixedBVPSpec {
public:
    MixedBVPSpec& dirichlet(BoundaryField values);
    MixedBVPSpec& neumann(BoundaryField flux);

    [[nodiscard]] const std::vector<BoundaryCondition>& conditions() const noexcept {
        return conditions_;
    }

    /// Throws ConfigError unless every segment present in `mesh` is covered
    /// exactly once and some Dirichlet condition has nodes.
    void validate(const TriMesh& mesh) const;

private:
    std::vector<BoundaryCondition> conditions_;
};

struct FemSolution {
    const TriMesh* mesh = nullptr;
    std::vector<double> values;
};

struct MixedSolution {
    FemSolution solution;
    /// Full right-hand side before Dirichlet elimination (Neumann loads).
    std::vector<double> load;
    /// Vertices carrying a Dirichlet constraint.
    std::vector<bool> constrained;
    SolveReport report;
};

/// Thrown when conjugate gradients fails to converge on a subproblem.
class SolverError : public Error {
public:
    SolverError(const std::string& what, SolveReport report)
        : Error(what), report_(report) {}
    [[nodiscard]] const SolveReport& report() const noexcept { return report_; }

private:
    SolveReport report_;
};

/// Solves mixed Dirichlet/Neumann Laplace problems on one mesh. Dirichlet
/// rows and columns are eliminated symmetrically; a node shared by a
/// Dirichlet and a Neumann edge is constrained. The reduced matrices are
/// cached per constraint pattern, so an instance is not safe for concurrent
/// use; the mesh must outlive it.
class MixedSolver {
public:
    explicit MixedSolver(const TriMesh& mesh, CgOptions options = {});

    [[nodiscard]] const TriMesh& mesh() const noexcept { return *mesh_; }
    [[nodiscard]] const CsrMatrix& stiffness() const noexcept { return stiffness_; }

    /// `initial_guess`, when non-empty, is a full nodal vector used to warm
    /// start CG on the free nodes.
    [[nodiscard]] MixedSolution solve(const MixedBVPSpec& spec,
                                      std::span<const double> initial_guess = {});

private:
    struct Reduced {
        std::vector<std::size_t> free_nodes;
        CsrMatrix matrix;
    };

    const TriMesh* mesh_;
    CgOptions options_;
    CsrMatrix stiffness_;
    std::map<std::vector<bool>, Reduced> reduced_cache_;
};

/// One-shot mixed solve.
[[nodiscard]] MixedSolution solve_mixed_bvp(const TriMesh& mesh, const MixedBVPSpec& spec);

/// Restriction of a nodal solution to the boundary chain of `set`.
[[nodiscard]] BoundaryField trace(const FemSolution& sol, BoundarySet set);

/// Variational normal derivative on `set`: the residual r = K u - F at the
/// chain nodes, converted to nodal values by solving M_set v = r with the
/// boundary mass matrix of the chain. `load` must already include the
/// Neumann loads of every segment outside `set`.
[[nodiscard]] BoundaryField normal_derivative(const FemSolution& sol, BoundarySet set,
                                              const CsrMatrix& stiffness,
                                              std::span<const double> load);

/// Normal derivative from the element gradients: on each boundary edge the
/// constant grad(u_h).n of its triangle, L2-projected onto continuous
/// piecewise-linear functions on the chain of `set`.
[[nodiscard]] BoundaryField gradient_normal_derivative(const FemSolution& sol, BoundarySet set);

/// How a driver extracts normal derivatives from a mixed solve.
enum class FluxMethod {
    /// Residual-based, consistent with the discrete weak form.
    Variational,
    /// Element gradient dotted with the edge normal, projected onto P1.
    ElementGradient,
};

/// Nodal flux weights r = K u - F over all vertices.
[[nodiscard]] std::vector<double> flux_weights(const FemSolution& sol, const CsrMatrix& stiffness,
                                               std::span<const double> load);

}  // namespace cauchy
