#pragma once

#include "epkit/polynomial.hpp"
#include "epkit/scalar.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace epkit {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

using ScalarValue = std::variant<ExactScalar, FloatScalar>;
using PolyValue = std::variant<ExactPoly, FloatPoly>;

// Scalar grammar: integers, fractions "a/b", decimals, imaginary unit "i"
// with optional coefficient, and signed sums like "1+4i". Integer and
// fraction literals produce the exact backend, decimal literals the float
// backend; mixing the two in one scalar is an error.
ScalarValue parse_scalar(std::string_view text);

// Polynomial grammar: signed sum of terms, each term an optional
// coefficient (parenthesized complex scalars allowed), an optional "*", and
// an optional "t" with an optional "^" natural exponent. Implicit
// multiplication as in "4it^2" is accepted. The only variable is t.
PolyValue parse_polynomial(std::string_view text);

inline Backend backend_of(const ScalarValue& v) {
    return std::holds_alternative<ExactScalar>(v) ? Backend::exact : Backend::fp64;
}
inline Backend backend_of(const PolyValue& v) {
    return std::holds_alternative<ExactPoly>(v) ? Backend::exact : Backend::fp64;
}

std::string render_rational(const Rational& q);

// Shortest round-trip decimal with a backend marker ('.' or exponent), so
// rendered float scalars never reparse as exact.
std::string render_double(double x);

// Raw shortest decimal without the marker; for residuals and tolerances.
std::string render_residual(double x);

std::string render_scalar(const ExactScalar& s);
std::string render_scalar(const FloatScalar& s);

std::string render_polynomial(const ExactPoly& p);
std::string render_polynomial(const FloatPoly& p);

} // namespace epkit
