// Unit-disk triangulation: Bowyer-Watson insertion of the boundary nodes and
// of concentric seed rings, followed by Delaunay refinement of poorly shaped
// triangles. The boundary is a convex polygon, so its edges are edges of the
// Delaunay triangulation and need no constraint handling as long as no point
// is inserted inside the diametral circle of a boundary edge.

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "cauchy/errors.hpp"
#include "cauchy/mesh.hpp"

namespace cauchy {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinAngleDeg = 20.0;

double orient(const Point2& a, const Point2& b, const Point2& c) noexcept {
    return (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
}

// > 0 when d lies strictly inside the circumcircle of the CCW triangle abc.
double incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) noexcept {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double ad = adx * adx + ady * ady;
    const double bd = bdx * bdx + bdy * bdy;
    const double cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

Point2 circumcenter(const Point2& a, const Point2& b, const Point2& c) noexcept {
    const double bx = b.x - a.x, by = b.y - a.y;
    const double cx = c.x - a.x, cy = c.y - a.y;
    const double d = 2.0 * (bx * cy - by * cx);
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    return {a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d};
}

double dist2(const Point2& a, const Point2& b) noexcept {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

double smallest_angle(const Point2& a, const Point2& b, const Point2& c) noexcept {
    const std::array<const Point2*, 3> p{&a, &b, &c};
    double smallest = kPi;
    for (int k = 0; k < 3; ++k) {
        const auto& o = *p[k];
        const auto& q = *p[(k + 1) % 3];
        const auto& r = *p[(k + 2) % 3];
        const double ux = q.x - o.x, uy = q.y - o.y;
        const double vx = r.x - o.x, vy = r.y - o.y;
        smallest = std::min(smallest, std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy));
    }
    return smallest;
}

class Delaunay {
public:
    struct Tri {
        std::array<int, 3> v;
        std::array<int, 3> nbr;  // nbr[i] is across the edge opposite v[i]
        bool alive = true;
    };

    explicit Delaunay(double extent) {
        const double s = extent;
        points_ = {{-3.0 * s, -3.0 * s}, {3.0 * s, -3.0 * s}, {0.0, 3.0 * s}};
        tris_.push_back({{0, 1, 2}, {-1, -1, -1}, true});
    }

    [[nodiscard]] const std::vector<Point2>& points() const noexcept { return points_; }
    [[nodiscard]] const std::vector<Tri>& tris() const noexcept { return tris_; }
    [[nodiscard]] bool is_super(int v) const noexcept { return v < 3; }

    /// Inserts p and returns the indices of the triangles created.
    std::vector<int> insert(const Point2& p) {
        const int pi = static_cast<int>(points_.size());
        points_.push_back(p);
        const int start = locate(p);

        std::vector<int> cavity;
        std::vector<char> in_cavity(tris_.size(), 0);
        std::deque<int> queue{start};
        in_cavity[start] = 1;
        while (!queue.empty()) {
            const int t = queue.front();
            queue.pop_front();
            cavity.push_back(t);
            for (int k = 0; k < 3; ++k) {
                const int n = tris_[t].nbr[k];
                if (n < 0 || in_cavity[n]) continue;
                const auto& v = tris_[n].v;
                if (incircle(points_[v[0]], points_[v[1]], points_[v[2]], p) > 0.0) {
                    in_cavity[n] = 1;
                    queue.push_back(n);
                }
            }
        }

        // Drop triangles whose outer edge does not see p, so the cavity stays
        // star-shaped under rounding.
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < cavity.size(); ++i) {
                const int t = cavity[i];
                if (t == start) continue;
                for (int k = 0; k < 3; ++k) {
                    const int n = tris_[t].nbr[k];
                    if (n >= 0 && in_cavity[n]) continue;
                    const auto& v = tris_[t].v;
                    if (orient(points_[v[(k + 1) % 3]], points_[v[(k + 2) % 3]], p) <= 0.0) {
                        in_cavity[t] = 0;
                        cavity.erase(cavity.begin() + static_cast<std::ptrdiff_t>(i));
                        changed = true;
                        break;
                    }
                }
                if (changed) break;
            }
        }

        struct OuterEdge {
            int a, b, outside;
        };
        std::vector<OuterEdge> outer;
        for (int t : cavity) {
            for (int k = 0; k < 3; ++k) {
                const int n = tris_[t].nbr[k];
                if (n >= 0 && in_cavity[n]) continue;
                outer.push_back({tris_[t].v[(k + 1) % 3], tris_[t].v[(k + 2) % 3], n});
            }
            tris_[t].alive = false;
        }

        std::vector<int> created;
        created.reserve(outer.size());
        std::unordered_map<int, int> by_start, by_end;
        for (const auto& e : outer) {
            const int id = static_cast<int>(tris_.size());
            tris_.push_back({{e.a, e.b, pi}, {-1, -1, e.outside}, true});
            created.push_back(id);
            by_start[e.a] = id;
            by_end[e.b] = id;
            if (e.outside >= 0) {
                auto& o = tris_[e.outside];
                for (int k = 0; k < 3; ++k) {
                    if (o.v[(k + 1) % 3] == e.b && o.v[(k + 2) % 3] == e.a) o.nbr[k] = id;
                }
            }
        }
        for (int id : created) {
            auto& t = tris_[id];
            t.nbr[0] = by_start.at(t.v[1]);
            t.nbr[1] = by_end.at(t.v[0]);
        }
        last_ = created.front();
        return created;
    }

private:
    int locate(const Point2& p) {
        int t = last_;
        if (t < 0 || !tris_[t].alive) t = first_alive();
        const std::size_t max_steps = 4 * tris_.size() + 16;
        for (std::size_t step = 0; step < max_steps; ++step) {
            const auto& tri = tris_[t];
            int next = -1;
            for (int k = 0; k < 3; ++k) {
                if (orient(points_[tri.v[(k + 1) % 3]], points_[tri.v[(k + 2) % 3]], p) < 0.0 &&
                    tri.nbr[k] >= 0) {
                    next = tri.nbr[k];
                    break;
                }
            }
            if (next < 0) return t;
            t = next;
        }
        // Walk cycled on a degenerate configuration; scan.
        for (std::size_t i = 0; i < tris_.size(); ++i) {
            const auto& tri = tris_[i];
            if (!tri.alive) continue;
            if (orient(points_[tri.v[0]], points_[tri.v[1]], p) >= 0.0 &&
                orient(points_[tri.v[1]], points_[tri.v[2]], p) >= 0.0 &&
                orient(points_[tri.v[2]], points_[tri.v[0]], p) >= 0.0)
                return static_cast<int>(i);
        }
        throw ValidationError("point location failed during disk meshing");
    }

    int first_alive() const {
        for (std::size_t i = tris_.size(); i-- > 0;)
            if (tris_[i].alive) return static_cast<int>(i);
        return -1;
    }

    std::vector<Point2> points_;
    std::vector<Tri> tris_;
    int last_ = 0;
};

}  // namespace

DiskSegmentCounts disk_segment_counts(int n_boundary, double theta) {
    if (!(theta > 0.0 && theta < 2.0 * kPi))
        throw ConfigError("theta must lie in (0, 2*pi), got " + std::to_string(theta));
    if (n_boundary < 8)
        throw ConfigError("n_boundary must be at least 8, got " + std::to_string(n_boundary));
    // The small slack keeps exact multiples (n*theta/(4*pi) == 1) from
    // rounding up.
    const double raw = static_cast<double>(n_boundary) * theta / (4.0 * kPi);
    int per_half = static_cast<int>(std::ceil(raw - 1e-9));
    per_half = std::clamp(per_half, 1, (n_boundary - 1) / 2);
    return {per_half, n_boundary - 2 * per_half};
}

TriMesh generate_disk_mesh(int n_boundary, double theta) {
    const auto counts = disk_segment_counts(n_boundary, theta);
    const int n1 = counts.per_half;
    const int n0 = counts.gamma0;
    const int nb = 2 * n1 + n0;

    std::vector<double> angles;
    angles.reserve(static_cast<std::size_t>(nb));
    const double half = 0.5 * theta;
    for (int k = 0; k < n1; ++k) angles.push_back(half * k / n1);
    for (int k = 0; k < n1; ++k) angles.push_back(k == 0 ? half : half + half * k / n1);
    for (int k = 0; k < n0; ++k)
        angles.push_back(k == 0 ? theta : theta + (2.0 * kPi - theta) * k / n0);

    std::vector<Point2> boundary;
    boundary.reserve(angles.size());
    for (double t : angles) boundary.push_back(t == 0.0 ? Point2{1.0, 0.0} : Point2{std::cos(t), std::sin(t)});

    Delaunay dt(4.0);
    for (const auto& p : boundary) dt.insert(p);

    const double h = 2.0 * kPi / nb;
    const int rings = std::max(1, static_cast<int>(std::lround(1.0 / (h * std::sqrt(3.0) / 2.0))));
    const double dr = 1.0 / rings;
    const bool apex_layer = rings >= 4;

    // First layer: the inward equilateral apex of each boundary edge whose
    // neighbours have a similar length, so the triangles along the boundary
    // follow its local spacing. Strongly graded spots are left to refinement.
    auto edge_length = [&](int i) {
        return std::sqrt(dist2(boundary[static_cast<std::size_t>((i + nb) % nb)],
                               boundary[static_cast<std::size_t>((i + 1 + nb) % nb)]));
    };
    for (int i = 0; apex_layer && i < nb; ++i) {
        const double len = edge_length(i);
        const double prev = edge_length(i - 1), next = edge_length(i + 1);
        if (std::max({len, prev, next}) > 1.5 * std::min({len, prev, next})) continue;
        const auto& a = boundary[static_cast<std::size_t>(i)];
        const auto& b = boundary[static_cast<std::size_t>((i + 1) % nb)];
        const double ex = b.x - a.x, ey = b.y - a.y;
        const double s = std::sqrt(3.0) / 2.0;
        dt.insert({0.5 * (a.x + b.x) - s * ey, 0.5 * (a.y + b.y) + s * ex});
    }

    // Seed rings, roughly equilateral with the mean boundary spacing. The
    // apex layer stands in for the outermost ring unless the disk is too
    // coarse for it.
    const double ring_h = dr * 2.0 / std::sqrt(3.0);
    for (int k = apex_layer ? 2 : 1; k < rings; ++k) {
        const double r = 1.0 - k * dr;
        const int m = std::max(3, static_cast<int>(std::lround(2.0 * kPi * r / ring_h)));
        // Golden-ratio stagger breaks the cocircular symmetry between rings.
        const double offset = std::fmod(k * 0.6180339887498949, 1.0) * 2.0 * kPi / m;
        for (int j = 0; j < m; ++j) {
            const double t = offset + 2.0 * kPi * j / m;
            dt.insert({r * std::cos(t), r * std::sin(t)});
        }
    }
    dt.insert({0.0, 0.0});

    // Boundary edge i runs from boundary[i] to boundary[i+1]; point index
    // in the triangulation is i + 3.
    // Edge whose diametral circle contains c, or, for c outside the polygon,
    // the nearest edge it lies behind; -1 when c is a safe interior point.
    auto encroached_edge = [&](const Point2& c) -> int {
        int behind = -1;
        double behind_d2 = 0.0;
        for (int i = 0; i < nb; ++i) {
            const auto& a = boundary[static_cast<std::size_t>(i)];
            const auto& b = boundary[static_cast<std::size_t>((i + 1) % nb)];
            const Point2 mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
            const double d2 = dist2(c, mid);
            if (d2 <= 0.25 * dist2(a, b)) return i;
            if (orient(a, b, c) <= 0.0 && (behind < 0 || d2 < behind_d2)) {
                behind = i;
                behind_d2 = d2;
            }
        }
        return behind;
    };

    const double min_angle_rad = kMinAngleDeg * kPi / 180.0;
    const double max_radius = 1.1 * h;
    auto is_bad = [&](const Delaunay::Tri& t) {
        if (!t.alive || dt.is_super(t.v[0]) || dt.is_super(t.v[1]) || dt.is_super(t.v[2]))
            return false;
        const auto& p = dt.points();
        const auto& a = p[t.v[0]];
        const auto& b = p[t.v[1]];
        const auto& c = p[t.v[2]];
        if (smallest_angle(a, b, c) < min_angle_rad) return true;
        return dist2(circumcenter(a, b, c), a) > max_radius * max_radius;
    };

    std::deque<int> queue;
    for (std::size_t i = 0; i < dt.tris().size(); ++i)
        if (is_bad(dt.tris()[i])) queue.push_back(static_cast<int>(i));
    std::vector<Point2> rejected;
    const std::size_t max_insertions = 20 * dt.points().size() + 1000;
    std::size_t insertions = 0;
    while (!queue.empty() && insertions < max_insertions) {
        const int id = queue.front();
        queue.pop_front();
        const auto& tri = dt.tris()[static_cast<std::size_t>(id)];
        if (!is_bad(tri)) continue;
        const auto& p = dt.points();
        Point2 c = circumcenter(p[tri.v[0]], p[tri.v[1]], p[tri.v[2]]);
        double spacing = std::sqrt(std::min({dist2(p[tri.v[0]], p[tri.v[1]]),
                                             dist2(p[tri.v[1]], p[tri.v[2]]),
                                             dist2(p[tri.v[2]], p[tri.v[0]])}));
        if (const int e = encroached_edge(c); e >= 0) {
            // Boundary nodes are fixed; use the apex of the inward
            // equilateral triangle on the encroached edge instead.
            const auto& a = boundary[static_cast<std::size_t>(e)];
            const auto& b = boundary[static_cast<std::size_t>((e + 1) % nb)];
            const double ex = b.x - a.x, ey = b.y - a.y;
            const double s = std::sqrt(3.0) / 2.0;
            c = {0.5 * (a.x + b.x) - s * ey, 0.5 * (a.y + b.y) + s * ex};
            spacing = std::sqrt(ex * ex + ey * ey);
            if (encroached_edge(c) >= 0) continue;
        }
        // Skip candidates crowding an existing point.
        bool crowded = false;
        for (const auto& q : p) {
            if (dist2(q, c) < 0.25 * spacing * spacing) {
                crowded = true;
                break;
            }
        }
        if (crowded) continue;
        for (int created : dt.insert(c))
            if (is_bad(dt.tris()[static_cast<std::size_t>(created)])) queue.push_back(created);
        ++insertions;
    }

    // Strip the super triangle; boundary points keep indices 0..nb-1.
    const auto& pts = dt.points();
    std::vector<Point2> vertices(pts.begin() + 3, pts.end());
    std::vector<Triangle> triangles;
    for (const auto& t : dt.tris()) {
        if (!t.alive || dt.is_super(t.v[0]) || dt.is_super(t.v[1]) || dt.is_super(t.v[2]))
            continue;
        triangles.push_back({static_cast<Index>(t.v[0] - 3), static_cast<Index>(t.v[1] - 3),
                             static_cast<Index>(t.v[2] - 3)});
    }

    std::vector<BoundaryEdge> edges;
    edges.reserve(static_cast<std::size_t>(nb));
    for (int i = 0; i < nb; ++i) {
        const auto label = i < n1       ? SegmentLabel::Gamma1_1
                           : i < 2 * n1 ? SegmentLabel::Gamma1_2
                                        : SegmentLabel::Gamma0;
        edges.push_back({static_cast<Index>(i), static_cast<Index>((i + 1) % nb), label});
    }
    return TriMesh(std::move(vertices), std::move(triangles), std::move(edges), theta);
}

}  // namespace cauchy
