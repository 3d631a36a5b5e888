#pragma once

// Exact-arithmetic foundations shared by every component: big integers and
// big rationals (Boost.Multiprecision, header-only backends), base-2
// logarithms of rationals, and comparisons against powers of two whose
// exponents are far too large to materialize.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace betaifs {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Malformed or out-of-contract input. The CLI maps this to exit code 2.
class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A computation would exceed a configured cap (memory or exponent budget).
// The CLI maps this to exit code 3.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rationals whose numerator+denominator bit count stays at or below this
// budget are carried exactly; past it, callers degrade to log2 brackets.
inline constexpr std::size_t kExactBitBudget = std::size_t{1} << 17;

// Hard ceiling on the exponent of any power of two we agree to materialize
// as an exact rational (the number itself would occupy ~512 KiB).
inline constexpr std::size_t kMaterializeBitCap = std::size_t{1} << 22;

inline BigInt numerator(const Rational& r) {
    return boost::multiprecision::numerator(r);
}

inline BigInt denominator(const Rational& r) {
    return boost::multiprecision::denominator(r);
}

// Number of bits in |v|; 0 for v == 0.
inline std::size_t bit_length(const BigInt& v) {
    if (v == 0) return 0;
    return boost::multiprecision::msb(boost::multiprecision::abs(v)) + 1;
}

inline bool is_power_of_two(const BigInt& v) {
    return v > 0 && boost::multiprecision::lsb(v) == boost::multiprecision::msb(v);
}

inline BigInt floor_log2(const BigInt& v) {
    if (v <= 0) throw input_error("floor_log2: argument must be positive");
    return BigInt(boost::multiprecision::msb(v));
}

inline BigInt ceil_log2(const BigInt& v) {
    BigInt f = floor_log2(v);
    return is_power_of_two(v) ? f : f + 1;
}

namespace detail {

// p, q > 0. True iff p/q >= 2^e, computed by shifting the smaller side.
inline bool ratio_ge_pow2(const BigInt& p, const BigInt& q, const BigInt& e) {
    if (e >= 0) {
        return p >= (q << static_cast<std::size_t>(e));
    }
    return (p << static_cast<std::size_t>(-e)) >= q;
}

} // namespace detail

// floor(log2(r)) for r > 0. The result always fits comfortably in memory
// (it is bounded by the operand's bit length), but is returned as BigInt so
// it can mix with the astronomically large exponents used elsewhere.
inline BigInt floor_log2(const Rational& r) {
    if (r <= 0) throw input_error("floor_log2: argument must be positive");
    const BigInt p = numerator(r);
    const BigInt q = denominator(r);
    // 2^(len(p)-len(q)-1) <= p/q < 2^(len(p)-len(q)+1), so the answer is
    // d or d-1 where d = len(p)-len(q).
    BigInt d = BigInt(bit_length(p)) - BigInt(bit_length(q));
    return detail::ratio_ge_pow2(p, q, d) ? d : d - 1;
}

inline bool is_power_of_two(const Rational& r) {
    return r > 0 && is_power_of_two(numerator(r) * denominator(r));
}

inline BigInt ceil_log2(const Rational& r) {
    BigInt f = floor_log2(r);
    return is_power_of_two(r) ? f : f + 1;
}

// Sign of (r - 2^e) for r > 0, without materializing 2^e.
inline int cmp_pow2(const Rational& r, const BigInt& e) {
    const BigInt f = floor_log2(r);
    if (f < e) return -1;
    if (f > e) return 1;
    return is_power_of_two(r) ? 0 : 1;
}

// 2^e as an exact rational; refuses exponents beyond the materialization cap.
inline Rational pow2_rational(const BigInt& e) {
    if (boost::multiprecision::abs(e) > kMaterializeBitCap) {
        throw resource_error("pow2_rational: exponent " + e.str() +
                             " exceeds the materialization cap");
    }
    BigInt one = 1;
    if (e >= 0) return Rational(one << static_cast<std::size_t>(e));
    return Rational(one, one << static_cast<std::size_t>(-e));
}

// b^e for e >= 0, guarded so intermediate sizes stay within max_bits.
inline Rational pow_rational(const Rational& b, const BigInt& e,
                             std::size_t max_bits = kMaterializeBitCap) {
    if (e < 0) throw input_error("pow_rational: negative exponent");
    if (b == 0) return e == 0 ? Rational(1) : Rational(0);
    const std::size_t operand_bits =
        bit_length(numerator(b)) + bit_length(denominator(b));
    if (BigInt(operand_bits) * e > BigInt(max_bits)) {
        throw resource_error("pow_rational: result would exceed bit budget");
    }
    Rational acc = 1;
    Rational base = b;
    BigInt k = e;
    while (k > 0) {
        if (boost::multiprecision::bit_test(k, 0)) acc *= base;
        k >>= 1;
        if (k > 0) base *= base;
    }
    return acc;
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    if (b == 0) throw input_error("floor_div: division by zero");
    BigInt q = a / b; // truncates toward zero
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline BigInt ceil_div(const BigInt& a, const BigInt& b) {
    if (b == 0) throw input_error("ceil_div: division by zero");
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
    return q;
}

inline BigInt floor_rational(const Rational& r) {
    return floor_div(numerator(r), denominator(r));
}

inline BigInt ceil_rational(const Rational& r) {
    return ceil_div(numerator(r), denominator(r));
}

// Smallest integer >= sqrt(n).
inline BigInt isqrt_ceil(const BigInt& n) {
    if (n < 0) throw input_error("isqrt_ceil: negative argument");
    BigInt s = boost::multiprecision::sqrt(n); // floor sqrt
    return s * s == n ? s : s + 1;
}

// Strict "p/q" (or bare "p") parser. No floats, no whitespace tolerance
// beyond surrounding spaces; denominator must be positive.
inline Rational parse_rational(std::string_view text) {
    std::size_t b = text.find_first_not_of(" \t");
    std::size_t e = text.find_last_not_of(" \t");
    if (b == std::string_view::npos) throw input_error("parse_rational: empty input");
    text = text.substr(b, e - b + 1);

    auto parse_int = [](std::string_view part, bool allow_sign) -> BigInt {
        if (part.empty()) throw input_error("parse_rational: empty integer part");
        std::size_t i = 0;
        if (allow_sign && (part[0] == '-' || part[0] == '+')) i = 1;
        if (i == part.size()) throw input_error("parse_rational: sign without digits");
        for (std::size_t j = i; j < part.size(); ++j) {
            if (part[j] < '0' || part[j] > '9') {
                throw input_error("parse_rational: expected integer or p/q, got '" +
                                  std::string(part) + "'");
            }
        }
        // cpp_int's string constructor rejects an explicit '+'.
        if (part[0] == '+') part.remove_prefix(1);
        return BigInt(std::string(part));
    };

    const std::size_t slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_int(text, true));
    }
    BigInt p = parse_int(text.substr(0, slash), true);
    BigInt q = parse_int(text.substr(slash + 1), false);
    if (q == 0) throw input_error("parse_rational: zero denominator");
    return Rational(p, q);
}

// Canonical form used in certificates and CLI output: always "p/q",
// including a "/1" for integers, so parsers never need two cases.
inline std::string format_rational(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

// Checked narrowing for shift amounts and container sizes.
inline std::size_t to_size(const BigInt& v, std::size_t cap,
                           const char* what = "value") {
    if (v < 0 || v > BigInt(cap)) {
        throw resource_error(std::string(what) + " " + v.str() +
                             " exceeds cap " + std::to_string(cap));
    }
    return static_cast<std::size_t>(v);
}

} // namespace betaifs
