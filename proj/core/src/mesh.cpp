#include "cauchy/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "cauchy/errors.hpp"

namespace cauchy {

namespace {

std::uint64_t edge_key(Index a, Index b) noexcept {
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::string edge_name(Index a, Index b) {
    return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

}  // namespace

std::string_view to_string(SegmentLabel label) noexcept {
    switch (label) {
        case SegmentLabel::Gamma0: return "G0";
        case SegmentLabel::Gamma1_1: return "G11";
        case SegmentLabel::Gamma1_2: return "G12";
    }
    return "?";
}

std::string to_string(BoundarySet set) {
    if (set == kGamma1) return "G1";
    std::string out;
    for (auto label : kAllLabels) {
        if (!set.contains(label)) continue;
        if (!out.empty()) out += "|";
        out += to_string(label);
    }
    return out.empty() ? "{}" : out;
}

double signed_area(const Point2& a, const Point2& b, const Point2& c) noexcept {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double polar_angle(const Point2& p) noexcept {
    double t = std::atan2(p.y, p.x);
    if (t < 0.0) t += 2.0 * std::numbers::pi;
    if (t >= 2.0 * std::numbers::pi) t -= 2.0 * std::numbers::pi;
    return t;
}

TriMesh::TriMesh(std::vector<Point2> vertices, std::vector<Triangle> triangles,
                 std::vector<BoundaryEdge> boundary_edges, std::optional<double> theta)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_edges_(std::move(boundary_edges)),
      theta_(theta) {
    const auto nv = vertices_.size();
    if (nv < 3) throw ValidationError("mesh needs at least 3 vertices");
    if (triangles_.empty()) throw ValidationError("mesh has no triangles");
    for (std::size_t i = 0; i < nv; ++i) {
        if (!std::isfinite(vertices_[i].x) || !std::isfinite(vertices_[i].y))
            throw ValidationError("vertex " + std::to_string(i) + " is not finite");
    }

    // Directed edge -> number of triangles using it in that direction.
    std::unordered_map<std::uint64_t, int> directed;
    directed.reserve(triangles_.size() * 3);
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto& tri = triangles_[t];
        for (auto v : tri) {
            if (v >= nv)
                throw ValidationError("triangle " + std::to_string(t) + " references vertex " +
                                      std::to_string(v) + " out of range");
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw ValidationError("triangle " + std::to_string(t) + " repeats a vertex");
        const double area =
            signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
        if (!(area > 0.0))
            throw ValidationError("triangle " + std::to_string(t) +
                                  " is clockwise or degenerate (signed area " +
                                  std::to_string(area) + ")");
        for (int k = 0; k < 3; ++k) {
            const Index a = tri[k];
            const Index b = tri[(k + 1) % 3];
            if (++directed[edge_key(a, b)] > 1)
                throw ValidationError("edge " + edge_name(a, b) +
                                      " used twice in the same direction");
        }
    }

    // Edges with no opposite twin are on the topological boundary.
    std::size_t n_open = 0;
    for (const auto& [key, count] : directed) {
        const auto a = static_cast<Index>(key >> 32);
        const auto b = static_cast<Index>(key & 0xffffffffu);
        if (!directed.contains(edge_key(b, a))) ++n_open;
    }

    std::unordered_set<std::uint64_t> seen;
    for (const auto& e : boundary_edges_) {
        if (e.a >= nv || e.b >= nv)
            throw ValidationError("boundary edge " + edge_name(e.a, e.b) + " out of range");
        if (!seen.insert(edge_key(e.a, e.b)).second)
            throw ValidationError("boundary edge " + edge_name(e.a, e.b) + " listed twice");
        const bool forward = directed.contains(edge_key(e.a, e.b));
        const bool backward = directed.contains(edge_key(e.b, e.a));
        if (!forward && !backward)
            throw ValidationError("boundary edge " + edge_name(e.a, e.b) +
                                  " is not on any triangle");
        if (forward && backward)
            throw ValidationError("boundary edge " + edge_name(e.a, e.b) +
                                  " is shared by two triangles");
        if (!forward)
            throw ValidationError("boundary edge " + edge_name(e.a, e.b) +
                                  " is oriented clockwise");
    }
    if (boundary_edges_.size() != n_open)
        throw ValidationError("boundary edges cover " + std::to_string(boundary_edges_.size()) +
                              " of " + std::to_string(n_open) + " boundary edges of the mesh");

    // One closed loop, listed in order.
    std::unordered_set<Index> visited;
    for (std::size_t i = 0; i < boundary_edges_.size(); ++i) {
        const auto& e = boundary_edges_[i];
        const auto& next = boundary_edges_[(i + 1) % boundary_edges_.size()];
        if (e.b != next.a)
            throw ValidationError("boundary edges " + std::to_string(i) + " and " +
                                  std::to_string((i + 1) % boundary_edges_.size()) +
                                  " are not consecutive");
        if (!visited.insert(e.a).second)
            throw ValidationError("boundary loop visits vertex " + std::to_string(e.a) + " twice");
    }
}

std::size_t TriMesh::num_edges() const {
    std::unordered_set<std::uint64_t> edges;
    edges.reserve(triangles_.size() * 2);
    for (const auto& tri : triangles_) {
        for (int k = 0; k < 3; ++k) {
            const Index a = tri[k];
            const Index b = tri[(k + 1) % 3];
            edges.insert(edge_key(std::min(a, b), std::max(a, b)));
        }
    }
    return edges.size();
}

double min_angle(const TriMesh& mesh) {
    double smallest = std::numbers::pi;
    for (const auto& tri : mesh.triangles()) {
        for (int k = 0; k < 3; ++k) {
            const auto& p = mesh.vertex(tri[k]);
            const auto& q = mesh.vertex(tri[(k + 1) % 3]);
            const auto& r = mesh.vertex(tri[(k + 2) % 3]);
            const double ux = q.x - p.x, uy = q.y - p.y;
            const double vx = r.x - p.x, vy = r.y - p.y;
            const double angle = std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy);
            smallest = std::min(smallest, angle);
        }
    }
    return smallest;
}

std::vector<BoundaryEdge> boundary_chain(const TriMesh& mesh, BoundarySet set) {
    const auto& edges = mesh.boundary_edges();
    const std::size_t k = edges.size();
    auto in = [&](std::size_t i) { return set.contains(edges[i % k].label); };

    std::size_t count = 0;
    for (std::size_t i = 0; i < k; ++i) count += in(i) ? 1 : 0;
    if (count == 0) return {};
    if (count == k) return edges;

    std::optional<std::size_t> start;
    for (std::size_t i = 0; i < k; ++i) {
        if (in(i) && !in(i + k - 1)) {
            if (start)
                throw ValidationError("boundary set " + to_string(set) +
                                      " is not a single contiguous chain");
            start = i;
        }
    }
    std::vector<BoundaryEdge> chain;
    chain.reserve(count);
    for (std::size_t i = *start; in(i); ++i) chain.push_back(edges[i % k]);
    return chain;
}

std::vector<Index> boundary_nodes(const TriMesh& mesh, BoundarySet set) {
    const auto chain = boundary_chain(mesh, set);
    std::vector<Index> nodes;
    if (chain.empty()) return nodes;
    nodes.reserve(chain.size() + 1);
    for (const auto& e : chain) nodes.push_back(e.a);
    if (chain.size() != mesh.boundary_edges().size()) nodes.push_back(chain.back().b);
    return nodes;
}

double boundary_measure(const TriMesh& mesh, BoundarySet set) {
    double total = 0.0;
    for (const auto& e : mesh.boundary_edges()) {
        if (!set.contains(e.label)) continue;
        const auto& p = mesh.vertex(e.a);
        const auto& q = mesh.vertex(e.b);
        total += std::hypot(q.x - p.x, q.y - p.y);
    }
    return total;
}

}  // namespace cauchy
