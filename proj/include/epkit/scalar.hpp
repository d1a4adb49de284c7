#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace epkit {

using BigInt = boost::multiprecision::cpp_int;

// Arbitrary-precision rational. cpp_rational keeps every value canonical
// (lowest terms, positive denominator) after each operation.
using Rational = boost::multiprecision::cpp_rational;

enum class Backend { exact, fp64 };

inline const char* backend_name(Backend b) {
    return b == Backend::exact ? "exact" : "float";
}

inline double to_double(const Rational& x) {
    return x.template convert_to<double>();
}

// Complex number with rational real and imaginary parts (a Gaussian
// rational). This is the exact-backend scalar; the field is closed under
// +, -, *, / so no operation ever leaves it.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(Rational re) : re_(std::move(re)) {}
    GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}
    GaussianRational(long re) : re_(re) {}
    GaussianRational(long re, long im) : re_(re), im_(im) {}

    const Rational& real() const { return re_; }
    const Rational& imag() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    GaussianRational conj() const { return {re_, -im_}; }

    Rational norm_sq() const { return re_ * re_ + im_ * im_; }

    std::complex<double> to_complex() const {
        return {to_double(re_), to_double(im_)};
    }

    GaussianRational operator-() const { return {-re_, -im_}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        Rational re = re_ * o.re_ - im_ * o.im_;
        Rational im = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(re);
        im_ = std::move(im);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        Rational d = o.norm_sq();
        if (d == 0) {
            throw std::domain_error("GaussianRational: division by zero");
        }
        Rational re = (re_ * o.re_ + im_ * o.im_) / d;
        Rational im = (im_ * o.re_ - re_ * o.im_) / d;
        re_ = std::move(re);
        im_ = std::move(im);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

private:
    Rational re_ = 0;
    Rational im_ = 0;
};

using ExactScalar = GaussianRational;
using FloatScalar = std::complex<double>;

// Uniform access to the two scalar backends. Generic code branches on
// is_exact with if constexpr; there is deliberately no conversion between
// backends inside the algebra.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<ExactScalar> {
    static constexpr bool is_exact = true;
    static constexpr Backend backend = Backend::exact;
    using real_type = Rational;

    static ExactScalar zero() { return {}; }
    static ExactScalar one() { return {1}; }
    static ExactScalar from_int(long re, long im = 0) { return {re, im}; }
    static ExactScalar conj(const ExactScalar& s) { return s.conj(); }
    static real_type norm_sq(const ExactScalar& s) { return s.norm_sq(); }
    static bool is_zero(const ExactScalar& s) { return s.is_zero(); }
    static std::complex<double> to_complex(const ExactScalar& s) { return s.to_complex(); }
};

template <>
struct scalar_traits<FloatScalar> {
    static constexpr bool is_exact = false;
    static constexpr Backend backend = Backend::fp64;
    using real_type = double;

    static FloatScalar zero() { return {0.0, 0.0}; }
    static FloatScalar one() { return {1.0, 0.0}; }
    static FloatScalar from_int(long re, long im = 0) {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
    static FloatScalar conj(const FloatScalar& s) { return std::conj(s); }
    static real_type norm_sq(const FloatScalar& s) { return std::norm(s); }
    static bool is_zero(const FloatScalar& s) { return s.real() == 0.0 && s.imag() == 0.0; }
    static std::complex<double> to_complex(const FloatScalar& s) { return s; }
};

inline FloatScalar to_float(const ExactScalar& s) { return s.to_complex(); }

} // namespace epkit
