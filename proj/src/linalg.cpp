#include "perceptsim/linalg.hpp"

#include "perceptsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace perceptsim {

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) t(c, r) = m(r, c);
    return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DomainError("multiply: dimension mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

std::vector<double> multiply(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw DomainError("multiply: dimension mismatch");
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * x[j];
    return out;
}

PivotedQr pivoted_qr(const Matrix& a, std::span<const double> b, double rank_tolerance) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m < n) throw DomainError(fmt::format("pivoted_qr: {} rows < {} columns", m, n));
    if (!b.empty() && b.size() != m) throw DomainError("pivoted_qr: right-hand side length mismatch");

    // Work column-major so each Householder step touches contiguous memory.
    std::vector<std::vector<double>> cols(n);
    for (std::size_t j = 0; j < n; ++j) cols[j] = a.column(j);
    std::vector<double> rhs(b.begin(), b.end());

    PivotedQr qr;
    qr.permutation.resize(n);
    std::iota(qr.permutation.begin(), qr.permutation.end(), std::size_t{0});

    auto tail_norm2 = [&](std::size_t j, std::size_t from) {
        double s = 0.0;
        for (std::size_t i = from; i < m; ++i) s += cols[j][i] * cols[j][i];
        return s;
    };

    for (std::size_t k = 0; k < n; ++k) {
        // Recomputing the remaining norms each step is O(mn) per column, which
        // is negligible for the handful of columns a design has.
        std::size_t best = k;
        double best_norm = tail_norm2(k, k);
        for (std::size_t j = k + 1; j < n; ++j) {
            const double nj = tail_norm2(j, k);
            if (nj > best_norm) {
                best = j;
                best_norm = nj;
            }
        }
        if (best != k) {
            std::swap(cols[k], cols[best]);
            std::swap(qr.permutation[k], qr.permutation[best]);
        }

        auto& v = cols[k];
        const double norm = std::sqrt(best_norm);
        if (norm == 0.0) continue;
        const double alpha = v[k] > 0.0 ? -norm : norm;
        // Householder vector u = x - alpha e1 stored in place below the diagonal.
        const double u0 = v[k] - alpha;
        double unorm2 = u0 * u0;
        for (std::size_t i = k + 1; i < m; ++i) unorm2 += v[i] * v[i];

        auto reflect = [&](std::vector<double>& x) {
            double dot = u0 * x[k];
            for (std::size_t i = k + 1; i < m; ++i) dot += v[i] * x[i];
            const double f = 2.0 * dot / unorm2;
            x[k] -= f * u0;
            for (std::size_t i = k + 1; i < m; ++i) x[i] -= f * v[i];
        };
        for (std::size_t j = k + 1; j < n; ++j) reflect(cols[j]);
        if (!rhs.empty()) reflect(rhs);
        v[k] = alpha;
        for (std::size_t i = k + 1; i < m; ++i) v[i] = 0.0;
    }

    qr.r = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i <= j; ++i) qr.r(i, j) = cols[j][i];
    qr.qt_b = std::move(rhs);

    const double lead = n > 0 ? std::fabs(qr.r(0, 0)) : 0.0;
    qr.rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(qr.r(i, i)) > rank_tolerance * lead && lead > 0.0) ++qr.rank;
    }
    return qr;
}

Matrix invert_upper(const Matrix& r) {
    const std::size_t n = r.rows();
    Matrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        if (r(j, j) == 0.0) throw SingularityError("invert_upper: zero on the diagonal");
        inv(j, j) = 1.0 / r(j, j);
        for (std::size_t ii = j; ii-- > 0;) {
            double s = 0.0;
            for (std::size_t k = ii + 1; k <= j; ++k) s += r(ii, k) * inv(k, j);
            inv(ii, j) = -s / r(ii, ii);
        }
    }
    return inv;
}

std::vector<double> singular_values(const Matrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    std::vector<std::vector<double>> cols(n);
    for (std::size_t j = 0; j < n; ++j) cols[j] = a.column(j);

    auto dot = [&](std::size_t p, std::size_t q) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += cols[p][i] * cols[q][i];
        return s;
    };

    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double alpha = dot(p, p);
                const double beta = dot(q, q);
                const double gamma = dot(p, q);
                if (std::fabs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double xp = cols[p][i];
                    const double xq = cols[q][i];
                    cols[p][i] = c * xp - s * xq;
                    cols[q][i] = s * xp + c * xq;
                }
            }
        if (!rotated) break;
    }

    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j) sv[j] = std::sqrt(dot(j, j));
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

}  // namespace perceptsim
