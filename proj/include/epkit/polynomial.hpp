#pragma once

#include "epkit/matrix.hpp"
#include "epkit/scalar.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace epkit {

// Complex polynomial in one variable, stored as ascending coefficients
// a_0..a_n with trailing zeros trimmed. The zero polynomial keeps a single
// zero coefficient so degree() is always well defined (degree 0).
template <class S>
class Polynomial {
public:
    using scalar_type = S;
    using traits = scalar_traits<S>;

    Polynomial() : coeffs_{traits::zero()} {}

    explicit Polynomial(std::vector<S> coeffs) : coeffs_(std::move(coeffs)) {
        while (coeffs_.size() > 1 && traits::is_zero(coeffs_.back())) coeffs_.pop_back();
        if (coeffs_.empty()) coeffs_.push_back(traits::zero());
    }

    static Polynomial t_power(unsigned n) {
        std::vector<S> c(n + 1, traits::zero());
        c[n] = traits::one();
        return Polynomial(std::move(c));
    }

    std::size_t degree() const { return coeffs_.size() - 1; }
    const std::vector<S>& coeffs() const { return coeffs_; }

    S coeff(std::size_t k) const {
        return k < coeffs_.size() ? coeffs_[k] : traits::zero();
    }

    bool is_zero() const { return coeffs_.size() == 1 && traits::is_zero(coeffs_[0]); }

    // p(0) = a_0.
    S constant_term() const { return coeffs_.front(); }

    S eval(const S& x) const {
        S acc = traits::zero();
        for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * x + coeffs_[k];
        return acc;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        std::vector<S> c(a.coeffs_.size() + b.coeffs_.size() - 1, traits::zero());
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Polynomial(std::move(c));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<S> c(std::max(a.coeffs_.size(), b.coeffs_.size()), traits::zero());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
        return Polynomial(std::move(c));
    }

private:
    std::vector<S> coeffs_;
};

using ExactPoly = Polynomial<ExactScalar>;
using FloatPoly = Polynomial<FloatScalar>;

// Horner evaluation a_n M^n + ... + a_1 M + a_0 I.
template <class S>
Matrix<S> poly_eval(const Polynomial<S>& p, const Matrix<S>& m) {
    if (!m.is_square()) throw std::invalid_argument("poly_eval: non-square matrix");
    const std::size_t n = m.rows();
    const auto& c = p.coeffs();
    Matrix<S> acc(n, n);
    for (std::size_t k = c.size(); k-- > 0;) {
        acc = acc * m;
        for (std::size_t i = 0; i < n; ++i) acc(i, i) += c[k];
    }
    return acc;
}

// Coefficient-wise conjugation p -> conj(p), chosen so that
// adjoint(p(M)) = conj(p)(adjoint(M)).
template <class S>
Polynomial<S> poly_conjugate(const Polynomial<S>& p) {
    std::vector<S> c;
    c.reserve(p.coeffs().size());
    for (const auto& a : p.coeffs()) c.push_back(scalar_traits<S>::conj(a));
    return Polynomial<S>(std::move(c));
}

// t^k * (p(t) - p(0)): the shifted polynomial p_k.
template <class S>
Polynomial<S> poly_shift_drop_constant(const Polynomial<S>& p, unsigned k) {
    const auto& c = p.coeffs();
    std::vector<S> out(c.size() + k, scalar_traits<S>::zero());
    for (std::size_t j = 1; j < c.size(); ++j) out[j + k] = c[j];
    return Polynomial<S>(std::move(out));
}

inline FloatPoly to_float(const ExactPoly& p) {
    std::vector<FloatScalar> c;
    c.reserve(p.coeffs().size());
    for (const auto& a : p.coeffs()) c.push_back(a.to_complex());
    return FloatPoly(std::move(c));
}

} // namespace epkit
