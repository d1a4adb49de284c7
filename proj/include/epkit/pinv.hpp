#pragma once

#include "epkit/core.hpp"
#include "epkit/elimination.hpp"
#include "epkit/float_backend.hpp"
#include "epkit/matrix.hpp"
#include "epkit/tolerance.hpp"

#include <array>
#include <cstddef>
#include <stdexcept>

namespace epkit {

// M = F G with F of full column rank and G of full row rank. The zero
// matrix factors as r = 0 with empty F (m x 0) and G (0 x n).
template <class S>
struct FullRankFactorization {
    Matrix<S> f;
    Matrix<S> g;
    std::size_t rank = 0;
};

// Exact: F = pivot columns of M, G = nonzero rows of the RREF.
// Float: F = U_r diag(sigma_r), G = V_r* from the SVD with the rank rule.
template <class S>
FullRankFactorization<S> full_rank_factorization(const Matrix<S>& m, const Tolerance& tol) {
    FullRankFactorization<S> out;
    if constexpr (scalar_traits<S>::is_exact) {
        RrefResult<S> red = rref(m);
        const std::size_t r = red.pivot_cols.size();
        out.rank = r;
        out.f = Matrix<S>(m.rows(), r);
        out.g = Matrix<S>(r, m.cols());
        for (std::size_t k = 0; k < r; ++k) {
            for (std::size_t i = 0; i < m.rows(); ++i) out.f(i, k) = m(i, red.pivot_cols[k]);
            for (std::size_t j = 0; j < m.cols(); ++j) out.g(k, j) = red.reduced(k, j);
        }
    } else {
        SvdResult svd = svd_decompose(m);
        const std::size_t r = rank_of(m, tol);
        out.rank = r;
        out.f = Matrix<S>(m.rows(), r);
        out.g = Matrix<S>(r, m.cols());
        for (std::size_t k = 0; k < r; ++k) {
            for (std::size_t i = 0; i < m.rows(); ++i) out.f(i, k) = svd.u(i, k) * svd.sigma[k];
            for (std::size_t j = 0; j < m.cols(); ++j) out.g(k, j) = std::conj(svd.v(j, k));
        }
    }
    return out;
}

// Moore-Penrose inverse. Exact route: T+ = G*(GG*)^{-1}(F*F)^{-1}F* from the
// full-rank factorization; both r x r Gram matrices are nonsingular. Float
// route: SVD with reciprocals of the retained singular values. The zero
// matrix maps to its transpose-shaped zero.
template <class S>
Matrix<S> moore_penrose(const Matrix<S>& m, const Tolerance& tol) {
    if constexpr (scalar_traits<S>::is_exact) {
        FullRankFactorization<S> frf = full_rank_factorization(m, tol);
        if (frf.rank == 0) return Matrix<S>(m.cols(), m.rows());
        Matrix<S> fs = adjoint(frf.f);
        Matrix<S> gs = adjoint(frf.g);
        return gs * gauss_inverse(frf.g * gs) * gauss_inverse(fs * frf.f) * fs;
    } else {
        const std::size_t r = rank_of(m, tol);
        if (r == 0) return Matrix<S>(m.cols(), m.rows());
        SvdResult svd = svd_decompose(m);
        Matrix<S> x(m.cols(), m.rows());
        for (std::size_t k = 0; k < r; ++k) {
            const double inv = 1.0 / svd.sigma[k];
            for (std::size_t i = 0; i < m.cols(); ++i) {
                if (scalar_traits<S>::is_zero(svd.v(i, k))) continue;
                const FloatScalar vik = svd.v(i, k) * inv;
                for (std::size_t j = 0; j < m.rows(); ++j) {
                    x(i, j) += vik * std::conj(svd.u(j, k));
                }
            }
        }
        return x;
    }
}

// Frobenius norms of the four Penrose defects:
// TXT - T, XTX - X, (XT)* - XT, (TX)* - TX.
template <class S>
std::array<double, 4> penrose_residuals(const Matrix<S>& t, const Matrix<S>& x) {
    if (x.rows() != t.cols() || x.cols() != t.rows()) {
        throw std::invalid_argument("penrose_residuals: X must be cols(T) x rows(T)");
    }
    Matrix<S> tx = t * x;
    Matrix<S> xt = x * t;
    return {
        frobenius(tx * t - t),
        frobenius(xt * x - x),
        frobenius(adjoint(xt) - xt),
        frobenius(adjoint(tx) - tx),
    };
}

// TT+ = P_{R(T)}.
template <class S>
Matrix<S> range_projector(const Matrix<S>& t, const Tolerance& tol) {
    return t * moore_penrose(t, tol);
}

// T+T = P_{R(T*)}.
template <class S>
Matrix<S> corange_projector(const Matrix<S>& t, const Tolerance& tol) {
    return moore_penrose(t, tol) * t;
}

// Cauchy dual w(T) = T (T*T)+, equal to adjoint(moore_penrose(T)).
template <class S>
Matrix<S> cauchy_dual(const Matrix<S>& t, const Tolerance& tol) {
    Matrix<S> ts = adjoint(t);
    return t * moore_penrose(ts * t, tol);
}

} // namespace epkit
