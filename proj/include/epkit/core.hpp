#pragma once

#include "epkit/elimination.hpp"
#include "epkit/float_backend.hpp"
#include "epkit/matrix.hpp"
#include "epkit/tolerance.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace epkit {

// Rank. Exact: fraction-free Gaussian elimination. Float: count of singular
// values strictly above rank_rel * sigma_max * max(rows, cols).
template <class S>
std::size_t rank_of(const Matrix<S>& m, const Tolerance& tol) {
    if (m.empty()) return 0;
    if constexpr (scalar_traits<S>::is_exact) {
        return bareiss_rank(m);
    } else {
        SvdResult svd = svd_decompose(m);
        if (svd.sigma.empty()) return 0;
        const double cutoff =
            tol.rank_rel * svd.sigma.front() * static_cast<double>(std::max(m.rows(), m.cols()));
        std::size_t r = 0;
        for (double s : svd.sigma)
            if (s > cutoff) ++r;
        return r;
    }
}

template <class S>
double residual_of(const Matrix<S>& a, const Matrix<S>& b) {
    return frobenius(a - b);
}

// Equality for classifier verdicts. Exact: entrywise. Float: Frobenius
// residual <= residual_rel * (1 + ||A||_F + ||B||_F).
template <class S>
bool matrices_equal(const Matrix<S>& a, const Matrix<S>& b, const Tolerance& tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    if constexpr (scalar_traits<S>::is_exact) {
        return a == b;
    } else {
        return frobenius(a - b) <= tol.residual_rel * (1.0 + frobenius(a) + frobenius(b));
    }
}

template <class S>
bool is_hermitian(const Matrix<S>& m, const Tolerance& tol) {
    if (!m.is_square()) throw std::invalid_argument("is_hermitian: non-square matrix");
    if constexpr (scalar_traits<S>::is_exact) {
        return m == adjoint(m);
    } else {
        return frobenius(m - adjoint(m)) <= tol.residual_rel * (1.0 + frobenius(m));
    }
}

// Coefficient sums of principal minors e_1..e_n via the Faddeev-LeVerrier
// recurrence: det(tI - M) = t^n - e_1 t^{n-1} + e_2 t^{n-2} - ...
// Exact backend only. Throws std::domain_error if some e_k comes out
// non-real (cannot happen for hermitian input).
inline std::vector<Rational> principal_minor_sums(const ExactMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("principal_minor_sums: non-square matrix");
    const std::size_t n = m.rows();
    std::vector<Rational> e(n);
    ExactMatrix mk = ExactMatrix::identity(n);
    ExactScalar ck{1};
    for (std::size_t k = 1; k <= n; ++k) {
        mk = m * mk;
        ExactScalar trace{};
        for (std::size_t i = 0; i < n; ++i) trace += mk(i, i);
        ck = -(trace / ExactScalar(static_cast<long>(k)));
        if (!ck.is_real()) throw std::domain_error("principal_minor_sums: non-real coefficient");
        e[k - 1] = (k % 2 == 0) ? ck.real() : -ck.real();
        for (std::size_t i = 0; i < n; ++i) mk(i, i) += ck;
    }
    return e;
}

// Positive semidefiniteness of a hermitian matrix. Exact: all principal
// minor sums e_k >= 0 (stays inside Gaussian rationals; no eigenvalues).
// Float: eigenvalues of the symmetrized matrix >= -psd_rel * (1 + ||M||_2);
// the 1 + anchor matches the other float rules and keeps the test sane when
// M itself is a roundoff-sized residual (e.g. [T+, T] of a float EP matrix).
template <class S>
bool is_psd(const Matrix<S>& m, const Tolerance& tol) {
    if (!is_hermitian(m, tol)) throw std::invalid_argument("is_psd: non-hermitian input");
    if (m.rows() == 0) return true;
    if constexpr (scalar_traits<S>::is_exact) {
        for (const Rational& ek : principal_minor_sums(m))
            if (ek < 0) return false;
        return true;
    } else {
        const double floor = -tol.psd_rel * (1.0 + spectral_norm_svd(m));
        for (double ev : hermitian_eigenvalues(m))
            if (ev < floor) return false;
        return true;
    }
}

// Magnitude of the PSD violation, for report residuals: 0 when PSD holds.
template <class S>
double psd_violation(const Matrix<S>& m, const Tolerance& tol) {
    if constexpr (scalar_traits<S>::is_exact) {
        Rational worst = 0;
        for (const Rational& ek : principal_minor_sums(m))
            if (ek < worst) worst = ek;
        return -to_double(worst);
    } else {
        const double floor = -tol.psd_rel * (1.0 + spectral_norm_svd(m));
        double worst = 0.0;
        for (double ev : hermitian_eigenvalues(m))
            if (ev < floor && ev < worst) worst = ev;
        return -worst;
    }
}

} // namespace epkit
