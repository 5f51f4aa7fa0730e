#pragma once

// Small meshes and independent oracles shared by the unit tests.

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "cauchy/fem.hpp"
#include "cauchy/mesh.hpp"
#include "cauchy/sparse.hpp"

namespace cauchy::testing {

inline constexpr double kPi = std::numbers::pi;

// Triangle (0,0), (s,0), (0,s): edge 0->1 is Gamma1_1, 1->2 Gamma1_2, 2->0 Gamma0.
inline TriMesh single_triangle(double s = 1.0) {
    return TriMesh({{0, 0}, {s, 0}, {0, s}}, {{0, 1, 2}},
                   {{0, 1, SegmentLabel::Gamma1_1},
                    {1, 2, SegmentLabel::Gamma1_2},
                    {2, 0, SegmentLabel::Gamma0}});
}

// Structured k x k unit square split along diagonals. Bottom and right sides
// are Gamma0, the top is Gamma1_1, the left side Gamma1_2, so the Neumann
// pieces of a mixed problem are straight segments.
inline TriMesh unit_square(int k) {
    std::vector<Point2> v;
    for (int j = 0; j <= k; ++j)
        for (int i = 0; i <= k; ++i) v.push_back({double(i) / k, double(j) / k});
    auto id = [k](int i, int j) { return Index(j * (k + 1) + i); };
    std::vector<Triangle> t;
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < k; ++i) {
            t.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            t.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    std::vector<BoundaryEdge> b;
    for (int i = 0; i < k; ++i) b.push_back({id(i, 0), id(i + 1, 0), SegmentLabel::Gamma0});
    for (int j = 0; j < k; ++j) b.push_back({id(k, j), id(k, j + 1), SegmentLabel::Gamma0});
    for (int i = k; i > 0; --i) b.push_back({id(i, k), id(i - 1, k), SegmentLabel::Gamma1_1});
    for (int j = k; j > 0; --j) b.push_back({id(0, j), id(0, j - 1), SegmentLabel::Gamma1_2});
    return TriMesh(std::move(v), std::move(t), std::move(b));
}

// Element stiffness through the cotangent formula: K_ij = -cot(angle opposite
// edge ij) / 2, diagonal from zero row sums.
inline std::array<std::array<double, 3>, 3> cotangent_stiffness(const std::array<Point2, 3>& p) {
    std::array<std::array<double, 3>, 3> k{};
    for (int c = 0; c < 3; ++c) {
        const auto& o = p[c];
        const auto& a = p[(c + 1) % 3];
        const auto& b = p[(c + 2) % 3];
        const double ux = a.x - o.x, uy = a.y - o.y, vx = b.x - o.x, vy = b.y - o.y;
        const double cot = (ux * vx + uy * vy) / std::abs(ux * vy - uy * vx);
        const int i = (c + 1) % 3, j = (c + 2) % 3;
        k[i][j] = k[j][i] = -0.5 * cot;
    }
    for (int i = 0; i < 3; ++i) k[i][i] = -(k[i][(i + 1) % 3] + k[i][(i + 2) % 3]);
    return k;
}

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const CsrMatrix& a) {
    Dense d(a.size(), std::vector<double>(a.size(), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t p = a.row_offsets()[i]; p < a.row_offsets()[i + 1]; ++p)
            d[i][a.col_indices()[p]] += a.values()[p];
    return d;
}

inline std::vector<double> dense_multiply(const Dense& a, const std::vector<double>& x) {
    std::vector<double> y(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    return y;
}

// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(Dense a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Length of a chord of the unit circle spanning `angle`.
inline double chord(double angle) { return 2.0 * std::sin(angle / 2.0); }

}  // namespace cauchy::testing
