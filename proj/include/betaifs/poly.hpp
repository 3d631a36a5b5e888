#pragma once

// Dense integer polynomials (constant term first), rational-coefficient
// helpers for gcd/square-free work, the text format used by the CLI, and
// the Landau 2-norm bound on the Mahler measure.

#include "betaifs/interval.hpp"
#include "betaifs/numeric.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace betaifs {

class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) {
        normalize();
    }
    IntPolynomial(std::initializer_list<long long> coeffs) {
        c_.reserve(coeffs.size());
        for (long long v : coeffs) c_.emplace_back(v);
        normalize();
    }
    static IntPolynomial constant(BigInt v) {
        IntPolynomial p;
        if (v != 0) p.c_.push_back(std::move(v));
        return p;
    }
    // x^k
    static IntPolynomial monomial(std::size_t k, BigInt coeff = BigInt(1)) {
        IntPolynomial p;
        if (coeff != 0) {
            p.c_.assign(k + 1, BigInt(0));
            p.c_[k] = std::move(coeff);
        }
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    // -1 for the zero polynomial.
    std::ptrdiff_t degree() const {
        return static_cast<std::ptrdiff_t>(c_.size()) - 1;
    }
    const std::vector<BigInt>& coeffs() const { return c_; }
    const BigInt& operator[](std::size_t i) const { return c_[i]; }
    BigInt coeff(std::size_t i) const {
        return i < c_.size() ? c_[i] : BigInt(0);
    }
    const BigInt& leading() const { return c_.back(); }

    BigInt height() const {
        BigInt h = 0;
        for (const BigInt& v : c_) {
            BigInt a = boost::multiprecision::abs(v);
            if (a > h) h = a;
        }
        return h;
    }

    friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) {
        return a.c_ == b.c_;
    }

    friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
        std::vector<BigInt> r(std::max(a.c_.size(), b.c_.size()), BigInt(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return IntPolynomial(std::move(r));
    }

    friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
        std::vector<BigInt> r(std::max(a.c_.size(), b.c_.size()), BigInt(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
        return IntPolynomial(std::move(r));
    }

    friend IntPolynomial operator-(const IntPolynomial& a) {
        std::vector<BigInt> r = a.c_;
        for (BigInt& v : r) v = -v;
        return IntPolynomial(std::move(r));
    }

    friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<BigInt> r(a.c_.size() + b.c_.size() - 1, BigInt(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                r[i + j] += a.c_[i] * b.c_[j];
            }
        }
        return IntPolynomial(std::move(r));
    }

    friend IntPolynomial operator*(const IntPolynomial& a, const BigInt& s) {
        std::vector<BigInt> r = a.c_;
        for (BigInt& v : r) v *= s;
        return IntPolynomial(std::move(r));
    }

    // p(x) * x^k
    IntPolynomial shifted_up(std::size_t k) const {
        if (is_zero()) return {};
        std::vector<BigInt> r(c_.size() + k, BigInt(0));
        for (std::size_t i = 0; i < c_.size(); ++i) r[i + k] = c_[i];
        return IntPolynomial(std::move(r));
    }

    Rational eval(const Rational& x) const {
        Rational acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + Rational(c_[i]);
        return acc;
    }

    BigInt eval(const BigInt& x) const {
        BigInt acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    RationalInterval eval(const RationalInterval& x) const {
        RationalInterval acc = RationalInterval::point(0);
        for (std::size_t i = c_.size(); i-- > 0;) {
            acc = acc * x + Rational(c_[i]);
        }
        return acc;
    }

    IntPolynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<BigInt> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * BigInt(i);
        return IntPolynomial(std::move(r));
    }

    // gcd of |coefficients|; 0 for the zero polynomial.
    BigInt content() const {
        BigInt g = 0;
        for (const BigInt& v : c_) {
            g = boost::multiprecision::gcd(g, v);
            if (g == 1) break;
        }
        return g;
    }

    // content-free version with positive leading coefficient.
    IntPolynomial primitive_part() const {
        if (is_zero()) return {};
        BigInt g = content();
        if (leading() < 0) g = -g;
        std::vector<BigInt> r = c_;
        for (BigInt& v : r) v /= g;
        return IntPolynomial(std::move(r));
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<BigInt> c_; // c_[i] multiplies x^i
};

namespace detail {

using QPoly = std::vector<Rational>; // constant first, trailing zeros stripped

inline void qp_normalize(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline QPoly qp_from(const IntPolynomial& p) {
    QPoly r;
    r.reserve(p.coeffs().size());
    for (const BigInt& v : p.coeffs()) r.emplace_back(v);
    return r;
}

// a mod b over Q, b nonzero.
inline QPoly qp_mod(QPoly a, const QPoly& b) {
    while (a.size() >= b.size() && !a.empty()) {
        const Rational f = a.back() / b.back();
        const std::size_t off = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
        a.pop_back();
        qp_normalize(a);
    }
    return a;
}

inline IntPolynomial qp_to_primitive(const QPoly& p) {
    if (p.empty()) return {};
    BigInt l = 1;
    for (const Rational& v : p) {
        l = boost::multiprecision::lcm(l, denominator(v));
    }
    std::vector<BigInt> r;
    r.reserve(p.size());
    for (const Rational& v : p) {
        r.push_back(numerator(v) * (l / denominator(v)));
    }
    return IntPolynomial(std::move(r)).primitive_part();
}

} // namespace detail

// Primitive gcd via the rational Euclidean algorithm. Degrees in this
// project stay tiny (minimal polynomials), so no subresultant tricks.
inline IntPolynomial poly_gcd(const IntPolynomial& a, const IntPolynomial& b) {
    detail::QPoly x = detail::qp_from(a);
    detail::QPoly y = detail::qp_from(b);
    while (!y.empty()) {
        detail::QPoly r = detail::qp_mod(std::move(x), y);
        x = std::move(y);
        y = std::move(r);
    }
    return detail::qp_to_primitive(x);
}

// Exact quotient a / b (throws if the division is not exact).
inline IntPolynomial poly_divexact(const IntPolynomial& a, const IntPolynomial& b) {
    if (b.is_zero()) throw input_error("poly_divexact: division by zero polynomial");
    detail::QPoly x = detail::qp_from(a);
    const detail::QPoly y = detail::qp_from(b);
    detail::QPoly q(x.size() >= y.size() ? x.size() - y.size() + 1 : 0, Rational(0));
    while (x.size() >= y.size() && !x.empty()) {
        const Rational f = x.back() / y.back();
        q[x.size() - y.size()] = f;
        const std::size_t off = x.size() - y.size();
        for (std::size_t i = 0; i < y.size(); ++i) x[off + i] -= f * y[i];
        x.pop_back();
        detail::qp_normalize(x);
    }
    if (!x.empty()) throw input_error("poly_divexact: inexact division");
    for (const Rational& v : q) {
        if (denominator(v) != 1) throw input_error("poly_divexact: inexact division");
    }
    std::vector<BigInt> r;
    r.reserve(q.size());
    for (const Rational& v : q) r.push_back(numerator(v));
    return IntPolynomial(std::move(r));
}

inline IntPolynomial square_free_part(const IntPolynomial& p) {
    if (p.is_zero()) throw input_error("square_free_part: zero polynomial");
    if (p.degree() == 0) return IntPolynomial::constant(1);
    const IntPolynomial g = poly_gcd(p, p.derivative());
    if (g.degree() == 0) return p.primitive_part();
    return poly_divexact(p.primitive_part(), g).primitive_part();
}

// Parses "x^2-2x-1", "2*x - 5", "7", "-x^3+4". Integer coefficients only;
// the variable letter is x.
inline IntPolynomial parse_polynomial(std::string_view text) {
    std::vector<BigInt> coeffs;
    std::size_t i = 0;
    const std::size_t n = text.size();

    auto skip_ws = [&] {
        while (i < n && (text[i] == ' ' || text[i] == '\t')) ++i;
    };
    auto fail = [&](const std::string& why) -> void {
        throw input_error("parse_polynomial: " + why + " in '" + std::string(text) + "'");
    };
    auto read_uint = [&]() -> BigInt {
        std::size_t start = i;
        while (i < n && text[i] >= '0' && text[i] <= '9') ++i;
        if (i == start) fail("expected digits");
        return BigInt(std::string(text.substr(start, i - start)));
    };

    skip_ws();
    if (i == n) fail("empty input");
    bool any_term = false;
    int sign = 1;
    bool have_sign = false;
    while (true) {
        skip_ws();
        if (i == n) {
            if (have_sign) fail("dangling sign");
            break;
        }
        if (text[i] == '+' || text[i] == '-') {
            if (have_sign) fail("doubled sign");
            if (!any_term && text[i] == '+') fail("leading '+'");
            sign = text[i] == '-' ? -1 : 1;
            have_sign = true;
            ++i;
            continue;
        }
        if (any_term && !have_sign) fail("missing operator between terms");

        BigInt coef = 1;
        bool saw_coef = false;
        if (text[i] >= '0' && text[i] <= '9') {
            coef = read_uint();
            saw_coef = true;
            skip_ws();
            if (i < n && text[i] == '*') {
                ++i;
                skip_ws();
                if (i == n || text[i] != 'x') fail("expected x after '*'");
            }
        }
        std::size_t exp = 0;
        if (i < n && text[i] == 'x') {
            ++i;
            exp = 1;
            skip_ws();
            if (i < n && text[i] == '^') {
                ++i;
                skip_ws();
                if (i == n || text[i] < '0' || text[i] > '9') fail("expected exponent digits");
                BigInt e = read_uint();
                exp = to_size(e, 1u << 20, "polynomial exponent");
            }
        } else if (!saw_coef) {
            fail("unexpected character");
        }
        if (coeffs.size() < exp + 1) coeffs.resize(exp + 1, BigInt(0));
        coeffs[exp] += sign * coef;
        any_term = true;
        sign = 1;
        have_sign = false;
    }
    if (!any_term) fail("no terms");
    return IntPolynomial(std::move(coeffs));
}

// Descending-power canonical text, inverse of parse_polynomial on its image.
inline std::string format_polynomial(const IntPolynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (std::size_t i = p.coeffs().size(); i-- > 0;) {
        const BigInt& c = p[i];
        if (c == 0) continue;
        const BigInt a = boost::multiprecision::abs(c);
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? "-" : "+";
        }
        if (i == 0) {
            out += a.str();
        } else {
            if (a != 1) out += a.str();
            out += "x";
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

// The family P(n, H): integer polynomials of degree <= n and height <= H.
struct PolyClass {
    unsigned n = 0;
    BigInt H = 1;

    bool contains(const IntPolynomial& p) const {
        return p.degree() <= static_cast<std::ptrdiff_t>(n) && p.height() <= H;
    }
};

// Rational r >= sqrt(sum of squared coefficients) >= Mahler measure
// (Landau's inequality), exact with denominator 1000.
inline Rational landau_mahler_bound(const IntPolynomial& m) {
    if (m.is_zero()) throw input_error("landau_mahler_bound: zero polynomial");
    BigInt s = 0;
    for (const BigInt& v : m.coeffs()) s += v * v;
    // sqrt(s) * 1000 = sqrt(s * 10^6); round the integer sqrt upward.
    return Rational(isqrt_ceil(s * 1000000), 1000);
}

} // namespace betaifs
