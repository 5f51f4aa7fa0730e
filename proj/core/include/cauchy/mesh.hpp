#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

namespace cauchy {

using Index = std::uint32_t;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Boundary segment of the unit-disk problem. The inaccessible part is the
/// union of Gamma1_1 and Gamma1_2.
enum class SegmentLabel : std::uint8_t { Gamma0 = 0, Gamma1_1 = 1, Gamma1_2 = 2 };

inline constexpr std::array<SegmentLabel, 3> kAllLabels{
    SegmentLabel::Gamma0, SegmentLabel::Gamma1_1, SegmentLabel::Gamma1_2};

std::string_view to_string(SegmentLabel label) noexcept;

/// A set of segment labels, used to select one segment or a union of them.
class BoundarySet {
public:
    constexpr BoundarySet() = default;
    constexpr BoundarySet(SegmentLabel label)  // NOLINT(google-explicit-constructor)
        : bits_(static_cast<std::uint8_t>(1u << static_cast<unsigned>(label))) {}

    [[nodiscard]] constexpr bool contains(SegmentLabel label) const noexcept {
        return (bits_ >> static_cast<unsigned>(label)) & 1u;
    }
    [[nodiscard]] constexpr bool empty() const noexcept { return bits_ == 0; }
    /// True when every label of `other` is also in this set.
    [[nodiscard]] constexpr bool includes(BoundarySet other) const noexcept {
        return (bits_ & other.bits_) == other.bits_;
    }
    [[nodiscard]] constexpr bool intersects(BoundarySet other) const noexcept {
        return (bits_ & other.bits_) != 0;
    }
    [[nodiscard]] constexpr std::uint8_t bits() const noexcept { return bits_; }

    constexpr BoundarySet operator|(BoundarySet other) const noexcept {
        BoundarySet out;
        out.bits_ = static_cast<std::uint8_t>(bits_ | other.bits_);
        return out;
    }
    constexpr BoundarySet operator&(BoundarySet other) const noexcept {
        BoundarySet out;
        out.bits_ = static_cast<std::uint8_t>(bits_ & other.bits_);
        return out;
    }
    friend constexpr bool operator==(BoundarySet, BoundarySet) = default;

private:
    std::uint8_t bits_ = 0;
};

inline constexpr BoundarySet kGamma0{SegmentLabel::Gamma0};
inline constexpr BoundarySet kGamma11{SegmentLabel::Gamma1_1};
inline constexpr BoundarySet kGamma12{SegmentLabel::Gamma1_2};
inline constexpr BoundarySet kGamma1 = kGamma11 | kGamma12;
inline constexpr BoundarySet kWholeBoundary = kGamma0 | kGamma1;

std::string to_string(BoundarySet set);

struct BoundaryEdge {
    Index a = 0;
    Index b = 0;
    SegmentLabel label = SegmentLabel::Gamma0;

    friend bool operator==(const BoundaryEdge&, const BoundaryEdge&) = default;
};

using Triangle = std::array<Index, 3>;

/// Triangulated planar domain with a labeled, counter-clockwise boundary loop.
///
/// Instances are immutable and always valid: the constructor checks
///   - every triangle has strictly positive signed area,
///   - each boundary edge belongs to exactly one triangle, with matching
///     orientation,
///   - the boundary edges form one closed loop that covers every edge used
///     by a single triangle.
class TriMesh {
public:
    TriMesh(std::vector<Point2> vertices, std::vector<Triangle> triangles,
            std::vector<BoundaryEdge> boundary_edges,
            std::optional<double> theta = std::nullopt);

    [[nodiscard]] const std::vector<Point2>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
    [[nodiscard]] const std::vector<BoundaryEdge>& boundary_edges() const noexcept {
        return boundary_edges_;
    }
    /// Split angle for generated disk meshes.
    [[nodiscard]] std::optional<double> theta() const noexcept { return theta_; }

    [[nodiscard]] std::size_t num_vertices() const noexcept { return vertices_.size(); }
    [[nodiscard]] std::size_t num_triangles() const noexcept { return triangles_.size(); }
    [[nodiscard]] const Point2& vertex(Index i) const { return vertices_.at(i); }

    /// Number of distinct edges (interior and boundary).
    [[nodiscard]] std::size_t num_edges() const;

    friend bool operator==(const TriMesh&, const TriMesh&) = default;

private:
    std::vector<Point2> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<BoundaryEdge> boundary_edges_;
    std::optional<double> theta_;
};

[[nodiscard]] double signed_area(const Point2& a, const Point2& b, const Point2& c) noexcept;

/// Smallest interior angle over all triangles, in radians.
[[nodiscard]] double min_angle(const TriMesh& mesh);

/// Unit-disk triangulation with boundary nodes placed uniformly per segment
/// so that the angles 0, theta/2 and theta are always nodes. Edges with
/// polar angle in (0, theta/2) are Gamma1_1, in (theta/2, theta) Gamma1_2,
/// the rest Gamma0.
///
/// Throws ConfigError for theta outside (0, 2*pi) or n_boundary < 8.
[[nodiscard]] TriMesh generate_disk_mesh(int n_boundary, double theta);

/// Number of boundary intervals assigned to each half of Gamma1 and to Gamma0.
struct DiskSegmentCounts {
    int per_half = 0;
    int gamma0 = 0;
};
[[nodiscard]] DiskSegmentCounts disk_segment_counts(int n_boundary, double theta);

/// Nodes of the labeled boundary chain in counter-clockwise order, both
/// endpoints included. For the union Gamma1 this is the Gamma1_1 nodes
/// followed by the Gamma1_2 nodes, the shared junction listed once. A set
/// covering the whole loop returns each boundary node once, starting at the
/// first boundary edge. Throws ValidationError if the set is not one
/// contiguous chain.
[[nodiscard]] std::vector<Index> boundary_nodes(const TriMesh& mesh, BoundarySet set);

/// Boundary edges of the set, in loop order (same chain as boundary_nodes).
[[nodiscard]] std::vector<BoundaryEdge> boundary_chain(const TriMesh& mesh, BoundarySet set);

/// Sum of the lengths of the boundary edges carrying a label in `set`.
[[nodiscard]] double boundary_measure(const TriMesh& mesh, BoundarySet set);

/// Polar angle of a point, in [0, 2*pi).
[[nodiscard]] double polar_angle(const Point2& p) noexcept;

// Text format:
//   tmesh 1
//   vertices N      followed by N lines "x y"
//   triangles M     followed by M lines "i j k" (0-based, CCW)
//   bedges K        followed by K lines "a b LABEL", LABEL in {G0, G11, G12}
// Floats are written with 17 significant digits.
void write_mesh(const TriMesh& mesh, std::ostream& out);
void write_mesh(const TriMesh& mesh, const std::filesystem::path& path);
[[nodiscard]] TriMesh read_mesh(std::istream& in);
[[nodiscard]] TriMesh read_mesh(const std::filesystem::path& path);

}  // namespace cauchy
