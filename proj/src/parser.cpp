#include "epkit/parser.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <vector>

namespace epkit {

namespace {

enum class NumKind { neutral, exact, decimal };

// A complex literal tracked in both representations while it is still
// backend-neutral (only signs, bare i, implicit ones). A literal pins the
// kind; exact and decimal literals may not meet in one value.
struct CNum {
    NumKind kind = NumKind::neutral;
    Rational re{0}, im{0};
    double re_d = 0.0, im_d = 0.0;

    static CNum one() {
        CNum c;
        c.re = 1;
        c.re_d = 1.0;
        return c;
    }
    static CNum imaginary_unit() {
        CNum c;
        c.im = 1;
        c.im_d = 1.0;
        return c;
    }
};

NumKind merge_kind(NumKind a, NumKind b, std::size_t pos) {
    if (a == NumKind::neutral) return b;
    if (b == NumKind::neutral) return a;
    if (a != b) throw ParseError("mixed exact and decimal literals", pos);
    return a;
}

CNum negate(CNum a) {
    a.re = -a.re;
    a.im = -a.im;
    a.re_d = -a.re_d;
    a.im_d = -a.im_d;
    return a;
}

CNum add(const CNum& a, const CNum& b, std::size_t pos) {
    CNum r;
    r.kind = merge_kind(a.kind, b.kind, pos);
    if (r.kind != NumKind::decimal) {
        r.re = a.re + b.re;
        r.im = a.im + b.im;
    }
    if (r.kind != NumKind::exact) {
        r.re_d = a.re_d + b.re_d;
        r.im_d = a.im_d + b.im_d;
    }
    return r;
}

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return pos < text.size() ? text[pos] : '\0'; }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// cpp_int's string constructor reads a leading 0 as an octal prefix, so
// digit runs go through here with the leading zeros dropped.
BigInt bigint_from_digits(std::string_view digits) {
    std::size_t first = 0;
    while (first + 1 < digits.size() && digits[first] == '0') ++first;
    return BigInt{std::string(digits.substr(first))};
}

// Unsigned numeric literal: digits, optionally "." digits and/or an
// exponent (decimal form), or "/" digits (exact fraction).
CNum parse_unsigned_number(Cursor& cur) {
    const std::size_t start = cur.pos;
    while (is_digit(cur.peek())) ++cur.pos;
    if (cur.pos == start) throw ParseError("expected a number", start);

    bool decimal = false;
    if (cur.peek() == '.') {
        decimal = true;
        ++cur.pos;
        while (is_digit(cur.peek())) ++cur.pos;
    }
    if (cur.peek() == 'e' || cur.peek() == 'E') {
        decimal = true;
        ++cur.pos;
        if (cur.peek() == '+' || cur.peek() == '-') ++cur.pos;
        const std::size_t ds = cur.pos;
        while (is_digit(cur.peek())) ++cur.pos;
        if (cur.pos == ds) throw ParseError("expected exponent digits", cur.pos);
    }

    CNum r;
    if (decimal) {
        r.kind = NumKind::decimal;
        double v = 0.0;
        std::from_chars(cur.text.data() + start, cur.text.data() + cur.pos, v);
        r.re_d = v;
        return r;
    }

    const std::string_view digits = cur.text.substr(start, cur.pos - start);
    if (cur.peek() == '/') {
        ++cur.pos;
        const std::size_t dstart = cur.pos;
        while (is_digit(cur.peek())) ++cur.pos;
        if (cur.pos == dstart) throw ParseError("expected denominator digits", cur.pos);
        BigInt den = bigint_from_digits(cur.text.substr(dstart, cur.pos - dstart));
        if (den == 0) throw ParseError("zero denominator", dstart);
        r.re = Rational(bigint_from_digits(digits), den);
    } else {
        r.re = Rational(bigint_from_digits(digits));
    }
    r.kind = NumKind::exact;
    r.re_d = to_double(r.re);
    return r;
}

// sterm := 'i' | number ['*'] 'i' | number
CNum parse_scalar_term(Cursor& cur) {
    cur.skip_ws();
    if (cur.accept('i')) return CNum::imaginary_unit();
    CNum n = parse_unsigned_number(cur);
    const std::size_t save = cur.pos;
    cur.skip_ws();
    const bool star = cur.accept('*');
    if (star) cur.skip_ws();
    if (cur.accept('i')) {
        CNum r;
        r.kind = n.kind;
        r.im = n.re;
        r.im_d = n.re_d;
        return r;
    }
    if (star) throw ParseError("expected 'i' after '*'", cur.pos);
    cur.pos = save;
    return n;
}

CNum parse_scalar_expr(Cursor& cur) {
    cur.skip_ws();
    bool neg = false;
    if (cur.accept('-'))
        neg = true;
    else
        cur.accept('+');
    CNum acc = parse_scalar_term(cur);
    if (neg) acc = negate(acc);
    for (;;) {
        cur.skip_ws();
        char c = cur.peek();
        if (c != '+' && c != '-') break;
        ++cur.pos;
        CNum term = parse_scalar_term(cur);
        if (c == '-') term = negate(term);
        acc = add(acc, term, cur.pos);
    }
    return acc;
}

ScalarValue to_scalar_value(const CNum& v) {
    if (v.kind == NumKind::decimal) return FloatScalar(v.re_d, v.im_d);
    return ExactScalar(v.re, v.im);
}

struct PolyTermParsed {
    CNum coeff;
    unsigned exponent = 0;
};

// pterm := [coefficient] ['*'] ['t' ['^' nat]], with at least a coefficient
// or a variable part. coefficient := '(' scalar ')' | number ['*'?] 'i' |
// number | 'i'.
PolyTermParsed parse_poly_term(Cursor& cur) {
    cur.skip_ws();
    CNum coeff = CNum::one();
    bool have_coeff = false;

    if (cur.accept('(')) {
        coeff = parse_scalar_expr(cur);
        cur.skip_ws();
        if (!cur.accept(')')) throw ParseError("expected ')'", cur.pos);
        have_coeff = true;
    } else if (cur.peek() == 'i') {
        ++cur.pos;
        coeff = CNum::imaginary_unit();
        have_coeff = true;
    } else if (is_digit(cur.peek())) {
        CNum n = parse_unsigned_number(cur);
        const std::size_t save = cur.pos;
        cur.skip_ws();
        const bool star = cur.accept('*');
        if (star) cur.skip_ws();
        if (cur.peek() == 'i') {
            ++cur.pos;
            CNum r;
            r.kind = n.kind;
            r.im = n.re;
            r.im_d = n.re_d;
            n = r;
        } else {
            cur.pos = save;
        }
        coeff = n;
        have_coeff = true;
    }

    const std::size_t save = cur.pos;
    cur.skip_ws();
    const bool star = cur.accept('*');
    if (star) cur.skip_ws();

    unsigned exponent = 0;
    bool have_t = false;
    if (cur.peek() == 't') {
        ++cur.pos;
        have_t = true;
        exponent = 1;
        if (cur.accept('^')) {
            const std::size_t ds = cur.pos;
            while (is_digit(cur.peek())) ++cur.pos;
            if (cur.pos == ds) throw ParseError("expected exponent digits", cur.pos);
            auto [ptr, ec] =
                std::from_chars(cur.text.data() + ds, cur.text.data() + cur.pos, exponent);
            if (ec != std::errc{}) throw ParseError("exponent out of range", ds);
        }
    } else {
        if (star) throw ParseError("expected 't' after '*'", cur.pos);
        cur.pos = save;
    }

    if (!have_coeff && !have_t) throw ParseError("expected a term", cur.pos);
    return {coeff, exponent};
}

} // namespace

ScalarValue parse_scalar(std::string_view text) {
    Cursor cur{text};
    CNum v = parse_scalar_expr(cur);
    cur.skip_ws();
    if (!cur.eof()) throw ParseError("unexpected character", cur.pos);
    return to_scalar_value(v);
}

PolyValue parse_polynomial(std::string_view text) {
    Cursor cur{text};
    std::vector<CNum> slots;
    NumKind poly_kind = NumKind::neutral;

    cur.skip_ws();
    bool neg = false;
    if (cur.accept('-'))
        neg = true;
    else
        cur.accept('+');

    for (;;) {
        PolyTermParsed term = parse_poly_term(cur);
        if (neg) term.coeff = negate(term.coeff);
        poly_kind = merge_kind(poly_kind, term.coeff.kind, cur.pos);
        if (slots.size() <= term.exponent) slots.resize(term.exponent + 1);
        slots[term.exponent] = add(slots[term.exponent], term.coeff, cur.pos);

        cur.skip_ws();
        const char c = cur.peek();
        if (c == '+' || c == '-') {
            neg = c == '-';
            ++cur.pos;
            continue;
        }
        break;
    }
    if (!cur.eof()) throw ParseError("unexpected character", cur.pos);
    if (slots.empty()) slots.push_back(CNum{});

    if (poly_kind == NumKind::decimal) {
        std::vector<FloatScalar> coeffs;
        coeffs.reserve(slots.size());
        for (const CNum& c : slots) coeffs.emplace_back(c.re_d, c.im_d);
        return FloatPoly(std::move(coeffs));
    }
    std::vector<ExactScalar> coeffs;
    coeffs.reserve(slots.size());
    for (const CNum& c : slots) coeffs.emplace_back(c.re, c.im);
    return ExactPoly(std::move(coeffs));
}

std::string render_rational(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

std::string render_residual(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, p);
}

std::string render_double(double x) {
    std::string s = render_residual(x);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string render_scalar(const ExactScalar& s) {
    const Rational& re = s.real();
    const Rational& im = s.imag();
    if (im == 0) return render_rational(re);

    std::string imag;
    if (im == 1)
        imag = "i";
    else if (im == -1)
        imag = "-i";
    else
        imag = render_rational(im) + "i";

    if (re == 0) return imag;
    std::string out = render_rational(re);
    if (im > 0) out += "+";
    return out + imag;
}

std::string render_scalar(const FloatScalar& s) {
    const double re = s.real();
    const double im = s.imag();
    if (im == 0.0) return render_double(re);
    std::string imag = render_double(im < 0 ? -im : im) + "i";
    if (re == 0.0) return (im < 0 ? "-" : "") + imag;
    return render_double(re) + (im < 0 ? "-" : "+") + imag;
}

namespace {

// Sign-split a coefficient: returns true and flips it when the leading sign
// should render as minus (negative real part, or pure imaginary negative).
template <class S>
bool take_minus(S& c);

template <>
bool take_minus<ExactScalar>(ExactScalar& c) {
    if (c.real() < 0 || (c.real() == 0 && c.imag() < 0)) {
        c = -c;
        return true;
    }
    return false;
}

template <>
bool take_minus<FloatScalar>(FloatScalar& c) {
    if (c.real() < 0.0 || (c.real() == 0.0 && c.imag() < 0.0)) {
        c = -c;
        return true;
    }
    return false;
}

std::string coeff_text(const ExactScalar& c, bool has_var) {
    const bool two_parts = c.real() != 0 && c.imag() != 0;
    if (!has_var) {
        return two_parts ? "(" + render_scalar(c) + ")" : render_scalar(c);
    }
    if (c == ExactScalar(1)) return "";
    if (two_parts) return "(" + render_scalar(c) + ")*";
    if (c.real() == 0 && c.imag() == 1) return "i*";
    return render_scalar(c) + "*";
}

std::string coeff_text(const FloatScalar& c, bool has_var) {
    // Float coefficients always render explicitly so the decimal marker
    // survives the round trip.
    const bool two_parts = c.real() != 0.0 && c.imag() != 0.0;
    std::string body = two_parts ? "(" + render_scalar(c) + ")" : render_scalar(c);
    return has_var ? body + "*" : body;
}

template <class S>
std::string render_poly_impl(const Polynomial<S>& p) {
    if (p.is_zero()) {
        if constexpr (scalar_traits<S>::is_exact)
            return "0";
        else
            return "0.0";
    }
    std::string out;
    for (std::size_t k = p.coeffs().size(); k-- > 0;) {
        S c = p.coeff(k);
        if (scalar_traits<S>::is_zero(c)) continue;
        const bool minus = take_minus(c);
        if (out.empty()) {
            if (minus) out += "-";
        } else {
            out += minus ? "-" : "+";
        }
        out += coeff_text(c, k > 0);
        if (k == 1)
            out += "t";
        else if (k > 1)
            out += "t^" + std::to_string(k);
    }
    return out;
}

} // namespace

std::string render_polynomial(const ExactPoly& p) { return render_poly_impl(p); }
std::string render_polynomial(const FloatPoly& p) { return render_poly_impl(p); }

} // namespace epkit
