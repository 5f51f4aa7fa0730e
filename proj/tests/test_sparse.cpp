#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cauchy/errors.hpp"
#include "cauchy/sparse.hpp"
#include "support.hpp"

namespace cauchy {
namespace {

using testing::Dense;

CsrMatrix from(std::size_t n, const std::vector<Triplet>& entries) {
    return CsrMatrix::from_triplets(n, entries);
}

// Random dense SPD matrix M^T M + I and its triplets; M has i.i.d. normal
// entries with standard deviation `scale`.
std::pair<Dense, std::vector<Triplet>> random_spd(std::size_t n, std::mt19937& rng,
                                                  double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Dense m(n, std::vector<double>(n));
    for (auto& row : m)
        for (auto& x : row) x = normal(rng);
    Dense a(n, std::vector<double>(n, 0.0));
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) a[i][j] += m[k][i] * m[k][j];
            if (i == j) a[i][j] += 1.0;
            t.push_back({i, j, a[i][j]});
        }
    }
    return {a, t};
}

TEST(Csr, DuplicatesAreSummed) {
    const auto a = from(2, {{0, 0, 1.0}, {0, 0, 2.0}, {1, 1, 4.0}});
    EXPECT_EQ(a.at(0, 0), 3.0);
    EXPECT_EQ(a.at(1, 1), 4.0);
    EXPECT_EQ(a.at(0, 1), 0.0);
    EXPECT_EQ(a.nonzeros(), 2u);
}

TEST(Csr, EmptyMatrixMultipliesToZero) {
    const auto a = from(3, {});
    const std::vector<double> x = {1, 2, 3};
    EXPECT_EQ(a.multiply(x), std::vector<double>(3, 0.0));
}

TEST(Csr, OutOfRangeEntryIsRejected) {
    EXPECT_THROW((void)from(2, {{2, 0, 1.0}}), ConfigError);
    EXPECT_THROW((void)from(2, {{0, 5, 1.0}}), ConfigError);
}

TEST(Csr, MultiplyMatchesDense) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    std::bernoulli_distribution keep(0.3);
    const std::size_t n = 20;
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (keep(rng)) t.push_back({i, j, u(rng)});
    // Duplicates on purpose.
    t.push_back({3, 4, 0.5});
    t.push_back({3, 4, 0.25});
    const auto a = CsrMatrix::from_triplets(n, t);
    Dense d(n, std::vector<double>(n, 0.0));
    for (const auto& e : t) d[e.row][e.col] += e.value;
    std::vector<double> x(n);
    for (auto& v : x) v = u(rng);
    const auto y = a.multiply(x);
    const auto y_ref = testing::dense_multiply(d, x);
    const double scale = *std::max_element(y_ref.begin(), y_ref.end(),
                                           [](double p, double q) { return std::abs(p) < std::abs(q); });
    EXPECT_LE(testing::max_abs_diff(y, y_ref), 1e-13 * std::max(1.0, std::abs(scale)));
}

TEST(Csr, PrincipalSubmatrixAndDiagonal) {
    const auto a = from(3, {{0, 0, 1}, {0, 2, 5}, {1, 1, 2}, {2, 0, 5}, {2, 2, 3}});
    const std::vector<std::size_t> keep = {2, 0};
    const auto sub = a.principal_submatrix(keep);
    EXPECT_EQ(sub.size(), 2u);
    EXPECT_EQ(sub.at(0, 0), 3.0);
    EXPECT_EQ(sub.at(0, 1), 5.0);
    EXPECT_EQ(sub.at(1, 1), 1.0);
    EXPECT_EQ(a.diagonal(), (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(a.asymmetry(), 0.0);
}

TEST(Cg, IdentityConvergesImmediately) {
    const auto a = from(4, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}, {3, 3, 1}});
    const std::vector<double> b = {1, -2, 3, 0.5};
    const auto r = conjugate_gradient(a, b);
    EXPECT_TRUE(r.report.converged);
    EXPECT_LE(r.report.iterations, 1u);
    EXPECT_LE(testing::max_abs_diff(r.x, b), 1e-14);
}

TEST(Cg, TwoByTwoMatchesDirectSolve) {
    const auto a = from(2, {{0, 0, 4}, {0, 1, 1}, {1, 0, 1}, {1, 1, 3}});
    const std::vector<double> b = {1, 2};
    const auto r = conjugate_gradient(a, b);
    ASSERT_TRUE(r.report.converged);
    EXPECT_NEAR(r.x[0], 1.0 / 11.0, 1e-10);
    EXPECT_NEAR(r.x[1], 7.0 / 11.0, 1e-10);
}

TEST(Cg, ZeroRightHandSide) {
    const auto a = from(2, {{0, 0, 4}, {0, 1, 1}, {1, 0, 1}, {1, 1, 3}});
    const std::vector<double> b = {0, 0};
    const auto r = conjugate_gradient(a, b);
    EXPECT_TRUE(r.report.converged);
    EXPECT_EQ(r.report.iterations, 0u);
    EXPECT_EQ(r.x, b);
}

TEST(Cg, RandomSpdWithinSizeBound) {
    // Entries of M scaled by 1/sqrt(n) keep the spectrum of M^T M + I bounded
    // independently of n.
    std::mt19937 rng(2024);
    for (const std::size_t n : {5u, 17u, 50u}) {
        const auto [dense, t] = random_spd(n, rng, 1.0 / std::sqrt(double(n)));
        const auto a = CsrMatrix::from_triplets(n, t);
        std::normal_distribution<double> normal;
        std::vector<double> b(n);
        for (auto& v : b) v = normal(rng);
        const auto r = conjugate_gradient(a, b, {1e-12, 0});
        ASSERT_TRUE(r.report.converged) << "n=" << n;
        EXPECT_LE(r.report.iterations, n + 10);
        const auto ax = testing::dense_multiply(dense, r.x);
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) res += (ax[i] - b[i]) * (ax[i] - b[i]);
        EXPECT_LE(std::sqrt(res), 1e-12 * norm2(b) * 1.0001);
        EXPECT_LE(testing::max_abs_diff(r.x, testing::dense_solve(dense, b)), 1e-10);
    }
}

TEST(Cg, RandomSpdUnscaledReachesTolerance) {
    std::mt19937 rng(2025);
    for (const std::size_t n : {5u, 17u, 50u}) {
        const auto [dense, t] = random_spd(n, rng);
        std::vector<double> b(n, 1.0);
        const auto r = conjugate_gradient(CsrMatrix::from_triplets(n, t), b, {1e-12, 0});
        ASSERT_TRUE(r.report.converged) << "n=" << n;
        EXPECT_LE(r.report.relative_residual, 1e-12);
        EXPECT_LE(testing::max_abs_diff(r.x, testing::dense_solve(dense, b)), 1e-9);
    }
}

TEST(Cg, PermutationInvariance) {
    std::mt19937 rng(99);
    const std::size_t n = 12;
    const auto [dense, t] = random_spd(n, rng);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Triplet> tp;
    for (const auto& e : t) tp.push_back({perm[e.row], perm[e.col], e.value});
    std::vector<double> b(n), bp(n);
    for (std::size_t i = 0; i < n; ++i) {
        b[i] = std::sin(double(i));
        bp[perm[i]] = b[i];
    }
    const auto x = conjugate_gradient(CsrMatrix::from_triplets(n, t), b, {1e-13, 0}).x;
    const auto xp = conjugate_gradient(CsrMatrix::from_triplets(n, tp), bp, {1e-13, 0}).x;
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(xp[perm[i]], x[i], 1e-9);
}

TEST(Cg, NonConvergenceIsReported) {
    std::mt19937 rng(5);
    const auto [dense, t] = random_spd(30, rng);
    const std::vector<double> b(30, 1.0);
    const auto r = conjugate_gradient(CsrMatrix::from_triplets(30, t), b, {1e-14, 2});
    EXPECT_FALSE(r.report.converged);
    EXPECT_EQ(r.report.iterations, 2u);
    EXPECT_GT(r.report.relative_residual, 1e-14);
}

TEST(Cg, WarmStartFromSolution) {
    const auto a = from(2, {{0, 0, 4}, {0, 1, 1}, {1, 0, 1}, {1, 1, 3}});
    const std::vector<double> b = {1, 2};
    const std::vector<double> x0 = {1.0 / 11.0, 7.0 / 11.0};
    const auto r = conjugate_gradient(a, b, {}, x0);
    EXPECT_TRUE(r.report.converged);
    EXPECT_EQ(r.report.iterations, 0u);
}

}  // namespace
}  // namespace cauchy
