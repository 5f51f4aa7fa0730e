#include "cauchy/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cauchy/errors.hpp"

namespace cauchy {

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

CsrMatrix CsrMatrix::from_triplets(std::size_t n, std::span<const Triplet> entries) {
    for (const auto& e : entries) {
        if (e.row >= n || e.col >= n)
            throw ConfigError("triplet (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                              ") out of range for dimension " + std::to_string(n));
    }
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const auto& a = entries[i];
        const auto& b = entries[j];
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    CsrMatrix m;
    m.n_ = n;
    m.row_offsets_.assign(n + 1, 0);
    m.col_indices_.reserve(entries.size());
    m.values_.reserve(entries.size());
    std::size_t last_row = n;
    std::size_t last_col = n;
    for (std::size_t idx : order) {
        const auto& e = entries[idx];
        if (e.row == last_row && e.col == last_col) {
            m.values_.back() += e.value;
            continue;
        }
        m.col_indices_.push_back(e.col);
        m.values_.push_back(e.value);
        ++m.row_offsets_[e.row + 1];
        last_row = e.row;
        last_col = e.col;
    }
    for (std::size_t i = 0; i < n; ++i) m.row_offsets_[i + 1] += m.row_offsets_[i];
    return m;
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw ConfigError("matrix index out of range");
    const auto begin = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    const auto end = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) d[i] = at(i, i);
    return d;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_ || y.size() != n_) throw ConfigError("spmv dimension mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            s += values_[k] * x[col_indices_[k]];
        y[i] = s;
    }
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(n_);
    multiply(x, y);
    return y;
}

CsrMatrix CsrMatrix::principal_submatrix(std::span<const std::size_t> keep) const {
    constexpr auto kDropped = static_cast<std::size_t>(-1);
    std::vector<std::size_t> new_index(n_, kDropped);
    for (std::size_t k = 0; k < keep.size(); ++k) {
        if (keep[k] >= n_) throw ConfigError("submatrix index out of range");
        new_index[keep[k]] = k;
    }
    CsrMatrix m;
    m.n_ = keep.size();
    m.row_offsets_.assign(m.n_ + 1, 0);
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t r = 0; r < keep.size(); ++r) {
        const std::size_t old = keep[r];
        row.clear();
        for (std::size_t k = row_offsets_[old]; k < row_offsets_[old + 1]; ++k) {
            const std::size_t c = new_index[col_indices_[k]];
            if (c != kDropped) row.emplace_back(c, values_[k]);
        }
        std::sort(row.begin(), row.end());
        for (const auto& [c, v] : row) {
            m.col_indices_.push_back(c);
            m.values_.push_back(v);
        }
        m.row_offsets_[r + 1] = m.col_indices_.size();
    }
    return m;
}

double CsrMatrix::asymmetry() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            worst = std::max(worst, std::abs(values_[k] - at(col_indices_[k], i)));
    }
    return worst;
}

CgResult conjugate_gradient(const CsrMatrix& a, std::span<const double> b,
                            const CgOptions& options, std::span<const double> initial_guess) {
    const std::size_t n = a.size();
    if (b.size() != n) throw ConfigError("right-hand side size does not match matrix");
    if (!(options.tolerance > 0.0)) throw ConfigError("CG tolerance must be positive");
    if (!initial_guess.empty() && initial_guess.size() != n)
        throw ConfigError("initial guess size does not match matrix");
    const std::size_t max_iter = options.max_iterations > 0 ? options.max_iterations : 10 * n;

    CgResult result;
    result.x.assign(n, 0.0);
    const double b_norm = norm2(b);
    if (b_norm == 0.0) {
        result.report = {0, 0.0, true};
        return result;
    }
    if (!initial_guess.empty()) std::copy(initial_guess.begin(), initial_guess.end(), result.x.begin());

    std::vector<double> inv_diag = a.diagonal();
    for (auto& d : inv_diag) d = d > 0.0 ? 1.0 / d : 1.0;

    auto& x = result.x;
    std::vector<double> r(n), z(n), p(n), ap(n);
    auto true_residual = [&] {
        a.multiply(x, r);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
        return norm2(r);
    };

    const double target = options.tolerance * b_norm;
    double r_norm = true_residual();
    std::size_t it = 0;
    while (r_norm > target && it < max_iter) {
        // (Re)start from the true residual.
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        p = z;
        double rz = dot(r, z);
        while (it < max_iter) {
            a.multiply(p, ap);
            const double pap = dot(p, ap);
            if (!(pap > 0.0)) break;
            const double alpha = rz / pap;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            ++it;
            if (norm2(r) <= target) break;
            for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
            const double rz_next = dot(r, z);
            const double beta = rz_next / rz;
            rz = rz_next;
            for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
        const double previous = r_norm;
        r_norm = true_residual();
        // Breakdown without progress: give up rather than loop.
        if (r_norm > target && r_norm >= previous && it < max_iter) break;
    }
    result.report = {it, r_norm / b_norm, r_norm <= target};
    return result;
}

}  // namespace cauchy
