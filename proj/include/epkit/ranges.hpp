#pragma once

#include "epkit/core.hpp"
#include "epkit/pinv.hpp"
#include "epkit/polynomial.hpp"
#include "epkit/prng.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace epkit {

// Basis of R(M). Exact: pivot columns of M. Float: leading left singular
// vectors under the rank rule.
template <class S>
std::vector<std::vector<S>> range_basis(const Matrix<S>& m, const Tolerance& tol) {
    std::vector<std::vector<S>> basis;
    if (m.empty()) return basis;
    if constexpr (scalar_traits<S>::is_exact) {
        RrefResult<S> red = rref(m);
        for (std::size_t col : red.pivot_cols) {
            std::vector<S> v(m.rows());
            for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, col);
            basis.push_back(std::move(v));
        }
    } else {
        const std::size_t r = rank_of(m, tol);
        SvdResult svd = svd_decompose(m);
        for (std::size_t k = 0; k < r; ++k) {
            std::vector<S> v(m.rows());
            for (std::size_t i = 0; i < m.rows(); ++i) v[i] = svd.u(i, k);
            basis.push_back(std::move(v));
        }
    }
    return basis;
}

// Basis of N(M). Exact: standard null-space construction from the RREF
// (free variable set to one, pivot entries read off with opposite sign).
// Float: trailing right singular vectors.
template <class S>
std::vector<std::vector<S>> kernel_basis(const Matrix<S>& m, const Tolerance& tol) {
    std::vector<std::vector<S>> basis;
    if (m.cols() == 0) return basis;
    if (m.rows() == 0) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::vector<S> v(m.cols(), scalar_traits<S>::zero());
            v[j] = scalar_traits<S>::one();
            basis.push_back(std::move(v));
        }
        return basis;
    }
    if constexpr (scalar_traits<S>::is_exact) {
        RrefResult<S> red = rref(m);
        std::vector<bool> is_pivot(m.cols(), false);
        for (std::size_t col : red.pivot_cols) is_pivot[col] = true;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (is_pivot[j]) continue;
            std::vector<S> v(m.cols(), scalar_traits<S>::zero());
            v[j] = scalar_traits<S>::one();
            for (std::size_t k = 0; k < red.pivot_cols.size(); ++k) {
                v[red.pivot_cols[k]] = -red.reduced(k, j);
            }
            basis.push_back(std::move(v));
        }
    } else {
        const std::size_t r = rank_of(m, tol);
        SvdResult svd = svd_decompose(m);
        for (std::size_t k = r; k < m.cols(); ++k) {
            std::vector<S> v(m.cols());
            for (std::size_t i = 0; i < m.cols(); ++i) v[i] = svd.v(i, k);
            basis.push_back(std::move(v));
        }
    }
    return basis;
}

template <class S>
struct InclusionWitness {
    std::size_t column = 0;          // offending column of A
    std::vector<S> residual;         // (I - BB+) * that column
    double residual_norm = 0.0;
};

// Outcome of an R(A) subset-of R(B) test. When the inclusion holds the
// witness is absent and `constant` carries ||B+A||_2, the norm of the
// Douglas factor C with A = BC.
template <class S>
struct InclusionVerdict {
    bool holds = false;
    std::optional<InclusionWitness<S>> witness;
    std::optional<double> constant;
};

// Largest singular value. Float route follows the documented scheme: power
// iteration on the Gram matrix M*M, at most 200 steps or relative change
// below 1e-12. Exact route: rank of the Gram matrix decides; rank <= 1 gives
// sqrt(trace) exactly, otherwise the iteration runs on the float image.
namespace detail {

inline double power_iteration_top_eig(const FloatMatrix& gram, std::uint64_t seed) {
    const std::size_t n = gram.rows();
    if (n == 0) return 0.0;
    SplitMix64 rng(seed);
    std::vector<FloatScalar> v(n);
    double norm = 0.0;
    for (auto& x : v) {
        x = FloatScalar(2.0 * rng.next_unit() - 1.0, 2.0 * rng.next_unit() - 1.0);
        norm += std::norm(x);
    }
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        std::vector<FloatScalar> w(n, FloatScalar{});
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) w[i] += gram(i, j) * v[j];
        double wnorm = 0.0;
        for (const auto& x : w) wnorm += std::norm(x);
        wnorm = std::sqrt(wnorm);
        if (wnorm == 0.0) return 0.0;
        const double prev = lambda;
        lambda = wnorm;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wnorm;
        if (it > 0 && std::abs(lambda - prev) < 1e-12 * lambda) break;
    }
    return lambda;
}

} // namespace detail

template <class S>
double operator_norm(const Matrix<S>& m) {
    if (m.empty() || m.is_zero()) return 0.0;
    if constexpr (scalar_traits<S>::is_exact) {
        ExactMatrix gram = adjoint(m) * m;
        std::size_t r = bareiss_rank(gram);
        if (r == 0) return 0.0;
        if (r == 1) {
            ExactScalar trace{};
            for (std::size_t i = 0; i < gram.rows(); ++i) trace += gram(i, i);
            return std::sqrt(to_double(trace.real()));
        }
        FloatMatrix gf = to_float(gram);
        double a = detail::power_iteration_top_eig(gf, 0x5eed0001ull);
        double b = detail::power_iteration_top_eig(gf, 0x5eed0002ull);
        return std::sqrt(std::max(a, b));
    } else {
        FloatMatrix gram = adjoint(m) * m;
        double a = detail::power_iteration_top_eig(gram, 0x5eed0001ull);
        double b = detail::power_iteration_top_eig(gram, 0x5eed0002ull);
        return std::sqrt(std::max(a, b));
    }
}

// R(A) subset-of R(B). Exact: rank([B|A]) == rank(B). Float:
// ||(I - BB+)A||_F <= residual_rel * (1 + ||A||_F). The witness is the worst
// offending column of A together with its projection residual.
template <class S>
InclusionVerdict<S> range_included(const Matrix<S>& a, const Matrix<S>& b, const Tolerance& tol) {
    if (a.rows() != b.rows()) throw std::invalid_argument("range_included: row count mismatch");
    InclusionVerdict<S> out;

    Matrix<S> bp = moore_penrose(b, tol);
    Matrix<S> proj_defect; // (I - BB+) A, only formed when needed

    bool holds;
    if constexpr (scalar_traits<S>::is_exact) {
        holds = a.cols() == 0 || rank_of(hcat(b, a), tol) == rank_of(b, tol);
        if (!holds) proj_defect = a - b * (bp * a);
    } else {
        proj_defect = a - b * (bp * a);
        holds = frobenius(proj_defect) <= tol.residual_rel * (1.0 + frobenius(a));
    }

    out.holds = holds;
    if (holds) {
        out.constant = operator_norm(bp * a);
        return out;
    }

    // Worst column: largest residual norm (exact compares squared norms).
    std::size_t worst = 0;
    if constexpr (scalar_traits<S>::is_exact) {
        Rational best = -1;
        for (std::size_t j = 0; j < proj_defect.cols(); ++j) {
            Rational nsq = frobenius_sq(proj_defect.column(j));
            if (nsq > best) {
                best = nsq;
                worst = j;
            }
        }
    } else {
        double best = -1.0;
        for (std::size_t j = 0; j < proj_defect.cols(); ++j) {
            double nsq = frobenius_sq(proj_defect.column(j));
            if (nsq > best) {
                best = nsq;
                worst = j;
            }
        }
    }
    InclusionWitness<S> w;
    w.column = worst;
    w.residual.resize(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) w.residual[i] = proj_defect(i, worst);
    w.residual_norm = frobenius(proj_defect.column(worst));
    out.witness = std::move(w);
    return out;
}

// Minimal k with ||p(T)* x|| <= k ||T x|| for all x, when R(p(T)) is
// contained in R(T*): k = ||p(T)* T+||_2, since p(T)* = (p(T)* T+) T under
// the inclusion and T+ annihilates the orthogonal complement of R(T).
template <class S>
std::optional<double> douglas_constant(const Matrix<S>& t, const Polynomial<S>& p,
                                       const Tolerance& tol) {
    Matrix<S> pt = poly_eval(p, t);
    if (!range_included(pt, adjoint(t), tol).holds) return std::nullopt;
    return operator_norm(adjoint(pt) * moore_penrose(t, tol));
}

// Minimal k with ||p(T)* x|| <= k ||w(T) x||: spectral norm of
// p(T)* w(T)+, guarded by the same range inclusion (R(w(T)*) = R(T*)).
template <class S>
std::optional<double> douglas_constant_dual(const Matrix<S>& t, const Polynomial<S>& p,
                                            const Tolerance& tol) {
    Matrix<S> pt = poly_eval(p, t);
    if (!range_included(pt, adjoint(t), tol).holds) return std::nullopt;
    Matrix<S> dual = cauchy_dual(t, tol);
    return operator_norm(adjoint(pt) * moore_penrose(dual, tol));
}

// Smallest c with |<p(T)x, y>| <= c ||Ty|| over all y: the norm of the
// minimal-norm solution s of T* s = p(T) x, when p(T) x lies in R(T*).
template <class S>
std::optional<double> pointwise_constant(const Matrix<S>& t, const Polynomial<S>& p,
                                         const Matrix<S>& x, const Tolerance& tol) {
    if (x.cols() != 1 || x.rows() != t.cols()) {
        throw std::invalid_argument("pointwise_constant: x must be a cols(T)-vector");
    }
    Matrix<S> ptx = poly_eval(p, t) * x;
    Matrix<S> ts = adjoint(t);
    if (!range_included(ptx, ts, tol).holds) return std::nullopt;
    Matrix<S> s = moore_penrose(ts, tol) * ptx;
    return frobenius(s);
}

} // namespace epkit
