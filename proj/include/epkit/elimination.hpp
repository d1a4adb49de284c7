#pragma once

#include "epkit/matrix.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace epkit {

namespace detail {

template <class S>
void swap_rows(Matrix<S>& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

// Pivot selection: exact backend takes the first nonzero entry, float takes
// the entry of largest magnitude. Returns rows() when the column is empty.
template <class S>
std::size_t pivot_row(const Matrix<S>& m, std::size_t from_row, std::size_t col) {
    if constexpr (scalar_traits<S>::is_exact) {
        for (std::size_t i = from_row; i < m.rows(); ++i)
            if (!scalar_traits<S>::is_zero(m(i, col))) return i;
        return m.rows();
    } else {
        std::size_t best = m.rows();
        double best_mag = 0.0;
        for (std::size_t i = from_row; i < m.rows(); ++i) {
            double mag = std::abs(m(i, col));
            if (mag > best_mag) {
                best_mag = mag;
                best = i;
            }
        }
        return best;
    }
}

} // namespace detail

template <class S>
struct RrefResult {
    Matrix<S> reduced;
    std::vector<std::size_t> pivot_cols;
};

// Reduced row echelon form over the exact field. Not offered for the float
// backend, where rank decisions belong to the SVD.
template <class S>
RrefResult<S> rref(Matrix<S> m) {
    static_assert(scalar_traits<S>::is_exact, "rref is an exact-backend routine");
    using traits = scalar_traits<S>;
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t piv = detail::pivot_row(m, row, col);
        if (piv == m.rows()) continue;
        detail::swap_rows(m, piv, row);
        S inv = traits::one() / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || traits::is_zero(m(i, col))) continue;
            S f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(m), std::move(pivots)};
}

// Rank by fraction-free (Bareiss) elimination with column skipping. Every
// division is exact, so the count of pivots is the true rank.
template <class S>
std::size_t bareiss_rank(Matrix<S> m) {
    static_assert(scalar_traits<S>::is_exact, "bareiss_rank is an exact-backend routine");
    using traits = scalar_traits<S>;
    std::size_t row = 0;
    S prev = traits::one();
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t piv = detail::pivot_row(m, row, col);
        if (piv == m.rows()) continue;
        detail::swap_rows(m, piv, row);
        const S pivot = m(row, col);
        for (std::size_t i = row + 1; i < m.rows(); ++i) {
            for (std::size_t j = col + 1; j < m.cols(); ++j) {
                m(i, j) = (pivot * m(i, j) - m(i, col) * m(row, j)) / prev;
            }
            m(i, col) = traits::zero();
        }
        prev = pivot;
        ++row;
    }
    return row;
}

// Gauss-Jordan inverse of a nonsingular square matrix. Throws
// std::domain_error on a singular input (float: pivot exactly zero, which
// callers only reach when an earlier rank decision was inconsistent).
template <class S>
Matrix<S> gauss_inverse(Matrix<S> m) {
    using traits = scalar_traits<S>;
    if (!m.is_square()) throw std::invalid_argument("gauss_inverse: non-square matrix");
    const std::size_t n = m.rows();
    Matrix<S> inv = Matrix<S>::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = detail::pivot_row(m, col, col);
        if (piv == n) throw std::domain_error("gauss_inverse: singular matrix");
        detail::swap_rows(m, piv, col);
        detail::swap_rows(inv, piv, col);
        S scale = traits::one() / m(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            m(col, j) *= scale;
            inv(col, j) *= scale;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || traits::is_zero(m(i, col))) continue;
            S f = m(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) -= f * m(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

} // namespace epkit
