#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace perceptsim {

// Dense row-major matrix of doubles, sized for small regression designs.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
    std::vector<double> column(std::size_t c) const;

    static Matrix identity(std::size_t n);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix transpose(const Matrix& m);
Matrix multiply(const Matrix& a, const Matrix& b);
std::vector<double> multiply(const Matrix& a, std::span<const double> x);

/// Householder QR with column pivoting, A P = Q R.
///
/// `r` is the leading cols x cols upper-triangular block, `permutation[i]` is
/// the original column sitting at position i, and `qt_b` holds Q^T b for the
/// right-hand side supplied at construction (empty when none was given).
struct PivotedQr {
    Matrix r;
    std::vector<std::size_t> permutation;
    std::vector<double> qt_b;
    std::size_t rank = 0;
};

// `rank_tolerance` is relative to |R(0,0)|: trailing pivots at or below it are
// treated as zero.
PivotedQr pivoted_qr(const Matrix& a, std::span<const double> b, double rank_tolerance = 1e-10);

// Inverse of an upper-triangular matrix by back substitution.
Matrix invert_upper(const Matrix& r);

// Singular values, descending, by one-sided Jacobi rotations.
std::vector<double> singular_values(const Matrix& a);

}  // namespace perceptsim
