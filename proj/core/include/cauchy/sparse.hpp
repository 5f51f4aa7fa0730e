#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cauchy {

struct Triplet {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

/// Compressed sparse row matrix. Column indices are sorted and unique within
/// each row; explicit zeros are kept.
class CsrMatrix {
public:
    CsrMatrix() = default;

    /// Sums duplicate entries. Throws ConfigError on an out-of-range index.
    static CsrMatrix from_triplets(std::size_t n, std::span<const Triplet> entries);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t nonzeros() const noexcept { return values_.size(); }

    [[nodiscard]] const std::vector<std::size_t>& row_offsets() const noexcept { return row_offsets_; }
    [[nodiscard]] const std::vector<std::size_t>& col_indices() const noexcept { return col_indices_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

    /// Stored value at (i, j), or 0 when the entry is structurally absent.
    [[nodiscard]] double at(std::size_t i, std::size_t j) const;

    [[nodiscard]] std::vector<double> diagonal() const;

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

    /// Principal submatrix on the given rows/columns (in the given order).
    [[nodiscard]] CsrMatrix principal_submatrix(std::span<const std::size_t> keep) const;

    /// max |A_ij - A_ji| over stored entries.
    [[nodiscard]] double asymmetry() const;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<std::size_t> col_indices_;
    std::vector<double> values_;
};

struct SolveReport {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

struct CgOptions {
    double tolerance = 1e-10;
    /// 0 selects 10 * n.
    std::size_t max_iterations = 0;
};

struct CgResult {
    std::vector<double> x;
    SolveReport report;
};

/// Jacobi-preconditioned conjugate gradients for symmetric positive definite
/// systems. Stops when ||b - A x||_2 <= tolerance * ||b||_2. `initial_guess`
/// may be empty (start from zero). Non-convergence is reported, not thrown.
[[nodiscard]] CgResult conjugate_gradient(const CsrMatrix& a, std::span<const double> b,
                                          const CgOptions& options = {},
                                          std::span<const double> initial_guess = {});

[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b) noexcept;
[[nodiscard]] double norm2(std::span<const double> a) noexcept;

}  // namespace cauchy
