#pragma once

#include "epkit/core.hpp"
#include "epkit/pinv.hpp"
#include "epkit/polynomial.hpp"
#include "epkit/ranges.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace epkit {

// Coordinates of T with respect to the orthogonal decomposition
// H = R(T*) (+) N(T):
//
//     T = [ T1  0 ]
//         [ T2  0 ]
//
// with D = T1~ T1 + T2~ T2 invertible, where ~ is the adjoint in the basis
// metric. Exact mode keeps the basis unnormalized (orthogonal, not
// orthonormal) so everything stays inside Gaussian rationals; the diagonal
// Gram matrices carry the metric. Float mode uses orthonormal singular
// vectors and the Grams are identities.
template <class S>
struct BlockRep {
    std::size_t dim = 0;                        // ambient dimension n
    std::size_t rank = 0;                       // r = dim R(T*)
    std::vector<std::vector<S>> corange_basis;  // orthogonal basis of R(T*)
    std::vector<std::vector<S>> kernel_basis;   // orthogonal basis of N(T)
    Matrix<S> gram_corange;                     // r x r diagonal
    Matrix<S> gram_kernel;                      // (n-r) x (n-r) diagonal
    Matrix<S> t1;                               // r x r
    Matrix<S> t2;                               // (n-r) x r
    Matrix<S> d;                                // r x r, invertible for rank >= 1

    Matrix<S> basis_matrix() const {
        Matrix<S> s(dim, dim);
        for (std::size_t j = 0; j < corange_basis.size(); ++j)
            for (std::size_t i = 0; i < dim; ++i) s(i, j) = corange_basis[j][i];
        for (std::size_t j = 0; j < kernel_basis.size(); ++j)
            for (std::size_t i = 0; i < dim; ++i) s(i, rank + j) = kernel_basis[j][i];
        return s;
    }

    Matrix<S> full_gram() const {
        Matrix<S> g(dim, dim);
        for (std::size_t i = 0; i < rank; ++i) g(i, i) = gram_corange(i, i);
        for (std::size_t i = rank; i < dim; ++i) g(i, i) = gram_kernel(i - rank, i - rank);
        return g;
    }
};

namespace detail {

// <x, y> = sum x_k conj(y_k), linear in the first argument.
template <class S>
S inner(const std::vector<S>& x, const std::vector<S>& y) {
    S acc = scalar_traits<S>::zero();
    for (std::size_t k = 0; k < x.size(); ++k) acc += x[k] * scalar_traits<S>::conj(y[k]);
    return acc;
}

// Gram-Schmidt without normalization: output vectors are pairwise
// orthogonal with the same span, entries staying in the scalar field.
template <class S>
std::vector<std::vector<S>> orthogonalize(std::vector<std::vector<S>> vecs) {
    for (std::size_t k = 0; k < vecs.size(); ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            S coef = inner(vecs[k], vecs[j]) / inner(vecs[j], vecs[j]);
            for (std::size_t i = 0; i < vecs[k].size(); ++i) vecs[k][i] -= coef * vecs[j][i];
        }
    }
    return vecs;
}

// X maps domain coordinates to codomain coordinates; returns the coordinate
// matrix of the ambient adjoint: X~ = Gdom^{-1} X* Gcod.
template <class S>
Matrix<S> metric_adjoint(const Matrix<S>& x, const Matrix<S>& gram_domain,
                         const Matrix<S>& gram_codomain) {
    Matrix<S> xs = adjoint(x);
    for (std::size_t i = 0; i < xs.rows(); ++i) {
        for (std::size_t j = 0; j < xs.cols(); ++j) {
            xs(i, j) = xs(i, j) * gram_codomain(j, j) / gram_domain(i, i);
        }
    }
    return xs;
}

} // namespace detail

// Build the block representation of a square T.
template <class S>
BlockRep<S> orthodecompose(const Matrix<S>& t, const Tolerance& tol) {
    if (!t.is_square()) throw std::invalid_argument("orthodecompose: non-square matrix");
    const std::size_t n = t.rows();
    BlockRep<S> rep;
    rep.dim = n;

    if constexpr (scalar_traits<S>::is_exact) {
        rep.corange_basis = detail::orthogonalize(range_basis(adjoint(t), tol));
        rep.kernel_basis = detail::orthogonalize(kernel_basis(t, tol));
    } else {
        // One SVD supplies both subspaces: leading right singular vectors
        // span R(T*), trailing ones span N(T), and they are orthonormal.
        const std::size_t r = rank_of(t, tol);
        SvdResult svd = svd_decompose(t);
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<S> v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = svd.v(i, k);
            if (k < r)
                rep.corange_basis.push_back(std::move(v));
            else
                rep.kernel_basis.push_back(std::move(v));
        }
    }

    const std::size_t r = rep.corange_basis.size();
    rep.rank = r;
    rep.gram_corange = Matrix<S>(r, r);
    for (std::size_t i = 0; i < r; ++i)
        rep.gram_corange(i, i) = detail::inner(rep.corange_basis[i], rep.corange_basis[i]);
    rep.gram_kernel = Matrix<S>(n - r, n - r);
    for (std::size_t i = 0; i < n - r; ++i)
        rep.gram_kernel(i, i) = detail::inner(rep.kernel_basis[i], rep.kernel_basis[i]);

    // Coordinates of T u_j: component on basis_i is <T u_j, basis_i> / g_i.
    rep.t1 = Matrix<S>(r, r);
    rep.t2 = Matrix<S>(n - r, r);
    for (std::size_t j = 0; j < r; ++j) {
        std::vector<S> tu(n, scalar_traits<S>::zero());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) tu[i] += t(i, k) * rep.corange_basis[j][k];
        for (std::size_t i = 0; i < r; ++i)
            rep.t1(i, j) = detail::inner(tu, rep.corange_basis[i]) / rep.gram_corange(i, i);
        for (std::size_t i = 0; i < n - r; ++i)
            rep.t2(i, j) = detail::inner(tu, rep.kernel_basis[i]) / rep.gram_kernel(i, i);
    }

    Matrix<S> t1s = detail::metric_adjoint(rep.t1, rep.gram_corange, rep.gram_corange);
    Matrix<S> t2s = detail::metric_adjoint(rep.t2, rep.gram_corange, rep.gram_kernel);
    rep.d = t1s * rep.t1 + t2s * rep.t2;
    return rep;
}

// Map a full n x n block-coordinate matrix back to ambient coordinates:
// ambient = S C G^{-1} S*.
template <class S>
Matrix<S> ambient_from_blocks(const BlockRep<S>& rep, const Matrix<S>& coord) {
    Matrix<S> s = rep.basis_matrix();
    Matrix<S> cg = coord;
    Matrix<S> g = rep.full_gram();
    for (std::size_t i = 0; i < cg.rows(); ++i)
        for (std::size_t j = 0; j < cg.cols(); ++j) cg(i, j) = cg(i, j) / g(j, j);
    return s * cg * adjoint(s);
}

// T+ assembled from the blocks: [[D^{-1} T1~, D^{-1} T2~], [0, 0]] in block
// coordinates, then mapped back to the ambient space. Throws
// std::domain_error when D is singular, which signals a rank decision
// inconsistent with the tolerances.
template <class S>
Matrix<S> pinv_from_blocks(const BlockRep<S>& rep) {
    const std::size_t n = rep.dim;
    const std::size_t r = rep.rank;
    Matrix<S> dinv;
    try {
        dinv = gauss_inverse(rep.d);
    } catch (const std::domain_error&) {
        throw std::domain_error("pinv_from_blocks: singular D (rank/tolerance inconsistency)");
    }
    Matrix<S> t1s = detail::metric_adjoint(rep.t1, rep.gram_corange, rep.gram_corange);
    Matrix<S> t2s = detail::metric_adjoint(rep.t2, rep.gram_corange, rep.gram_kernel);
    Matrix<S> top_left = dinv * t1s;
    Matrix<S> top_right = dinv * t2s;
    Matrix<S> coord(n, n);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) coord(i, j) = top_left(i, j);
        for (std::size_t j = 0; j < n - r; ++j) coord(i, r + j) = top_right(i, j);
    }
    return ambient_from_blocks(rep, coord);
}

// q(z) = (p(z) - p(0)) / z.
template <class S>
Polynomial<S> q_reduce(const Polynomial<S>& p) {
    const auto& c = p.coeffs();
    if (c.size() <= 1) return Polynomial<S>();
    std::vector<S> q(c.begin() + 1, c.end());
    return Polynomial<S>(std::move(q));
}

struct RepCriterion {
    bool block_zero = false;   // T2 q(T1) == 0
    double block_residual = 0.0;
    bool equi_ii = false;      // T+ T p(T) T* T == p(T) T* T
    double equi_ii_residual = 0.0;
    bool equi_iii = false;     // T+ T p(T) T* == p(T) T*
    double equi_iii_residual = 0.0;
    bool defining = false;     // T+ T p(T) == p(T) T+ T
    bool agree = false;        // all four verdicts coincide
};

// The block criterion T2 q(T1) = 0 next to the two ambient identities it is
// equivalent to. Agreement with the defining commutation is reported; the
// equivalence is only asserted by callers when p(0) = 0.
template <class S>
RepCriterion rep_criterion(const Matrix<S>& t, const Polynomial<S>& p, const Tolerance& tol) {
    if (!t.is_square()) throw std::invalid_argument("rep_criterion: non-square matrix");
    RepCriterion out;

    BlockRep<S> rep = orthodecompose(t, tol);
    Matrix<S> tq = rep.t2 * poly_eval(q_reduce(p), rep.t1);
    out.block_residual = frobenius(tq);
    if constexpr (scalar_traits<S>::is_exact) {
        out.block_zero = tq.is_zero();
    } else {
        out.block_zero = out.block_residual <=
                         tol.residual_rel * (1.0 + frobenius(rep.t2) + frobenius(rep.t1));
    }

    Matrix<S> pt = poly_eval(p, t);
    Matrix<S> ts = adjoint(t);
    Matrix<S> proj = corange_projector(t, tol); // T+ T

    Matrix<S> lhs_ii = proj * pt * ts * t;
    Matrix<S> rhs_ii = pt * ts * t;
    out.equi_ii = matrices_equal(lhs_ii, rhs_ii, tol);
    out.equi_ii_residual = residual_of(lhs_ii, rhs_ii);

    Matrix<S> lhs_iii = proj * pt * ts;
    Matrix<S> rhs_iii = pt * ts;
    out.equi_iii = matrices_equal(lhs_iii, rhs_iii, tol);
    out.equi_iii_residual = residual_of(lhs_iii, rhs_iii);

    out.defining = matrices_equal(proj * pt, pt * proj, tol);
    out.agree = out.block_zero == out.equi_ii && out.equi_ii == out.equi_iii &&
                out.equi_iii == out.defining;
    return out;
}

// For p-hypo-EP T, p(T) acts blockwise as diag(p(T1), a0 I). Returns the
// two diagonal blocks and checks that their ambient reassembly reproduces
// poly_eval(p, T).
template <class S>
std::pair<Matrix<S>, Matrix<S>> block_form_of_poly(const Matrix<S>& t, const Polynomial<S>& p,
                                                   const Tolerance& tol) {
    if (!t.is_square()) throw std::invalid_argument("block_form_of_poly: non-square matrix");
    Matrix<S> pt = poly_eval(p, t);
    Matrix<S> proj = corange_projector(t, tol);
    if (!matrices_equal(proj * pt, pt * proj, tol)) {
        throw std::invalid_argument("block_form_of_poly: T is not p-hypo-EP");
    }
    BlockRep<S> rep = orthodecompose(t, tol);
    Matrix<S> pt1 = poly_eval(p, rep.t1);
    Matrix<S> a0_block = Matrix<S>::identity(rep.dim - rep.rank);
    a0_block *= p.constant_term();

    Matrix<S> coord(rep.dim, rep.dim);
    for (std::size_t i = 0; i < rep.rank; ++i)
        for (std::size_t j = 0; j < rep.rank; ++j) coord(i, j) = pt1(i, j);
    for (std::size_t i = rep.rank; i < rep.dim; ++i) coord(i, i) = p.constant_term();
    Matrix<S> ambient = ambient_from_blocks(rep, coord);
    if (!matrices_equal(ambient, pt, tol)) {
        throw std::logic_error("block_form_of_poly: reassembly mismatch");
    }
    return {std::move(pt1), std::move(a0_block)};
}

} // namespace epkit
