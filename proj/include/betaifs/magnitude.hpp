#pragma once

// Certified magnitudes for strictly positive quantities whose exact values
// can be astronomically large or small (think 2^(10^16)). A Magnitude keeps
// the exact rational while it fits kExactBitBudget and otherwise degrades to
// a dyadic bracket 2^lo <= x <= 2^hi with big-integer endpoints. Every
// operation takes the same path for the same operands, so a construction and
// its later replay reach bit-identical results.
//
// Exponent choices made through this header follow the dyadic convention:
// for a base beta >= 2 we pick exponents so that 2^e already clears the
// required threshold, which beta^e >= 2^e then clears as well. For beta = 2
// the choice coincides with the true minimum.

#include "betaifs/algebraic.hpp"
#include "betaifs/beta_poly.hpp"
#include "betaifs/numeric.hpp"

#include <optional>
#include <utility>

namespace betaifs {

class Magnitude {
public:
    Magnitude() : exact_(Rational(1)), log2_lo_(0), log2_hi_(0) {}

    static Magnitude from_rational(Rational r) {
        if (r <= 0) throw input_error("Magnitude: value must be positive");
        Magnitude m;
        m.log2_lo_ = floor_log2(r);
        m.log2_hi_ = ceil_log2(r);
        if (rational_bits(r) <= BigInt(kExactBitBudget)) m.exact_ = std::move(r);
        else m.exact_.reset();
        return m;
    }

    // Exactly 2^e. Small exponents keep the rational form so downstream
    // minima and products stay exact.
    static Magnitude from_pow2(const BigInt& e) {
        Magnitude m;
        m.log2_lo_ = e;
        m.log2_hi_ = e;
        if (boost::multiprecision::abs(e) <= BigInt(kExactBitBudget)) {
            m.exact_ = pow2_rational(e);
        } else {
            m.exact_.reset();
        }
        return m;
    }

    // A value known only through 2^lo <= x <= 2^hi.
    static Magnitude from_bracket(BigInt lo2, BigInt hi2) {
        if (lo2 > hi2) throw input_error("Magnitude: empty bracket");
        Magnitude m;
        m.exact_.reset();
        m.log2_lo_ = std::move(lo2);
        m.log2_hi_ = std::move(hi2);
        return m;
    }

    bool is_exact() const { return exact_.has_value(); }

    const Rational& exact_value() const {
        if (!exact_) throw input_error("Magnitude: no exact value available");
        return *exact_;
    }

    const BigInt& log2_lo() const { return log2_lo_; }
    const BigInt& log2_hi() const { return log2_hi_; }

    Magnitude reciprocal() const {
        if (exact_) return from_rational(Rational(1) / *exact_);
        Magnitude m;
        m.exact_.reset();
        m.log2_lo_ = -log2_hi_;
        m.log2_hi_ = -log2_lo_;
        return m;
    }

    // x^e for e >= 0.
    Magnitude pow(const BigInt& e) const {
        if (e < 0) throw input_error("Magnitude::pow: negative exponent");
        if (e == 0) return from_rational(Rational(1));
        if (exact_ && e * rational_bits(*exact_) <= BigInt(kExactBitBudget)) {
            return from_rational(pow_rational(*exact_, e, kMaterializeBitCap));
        }
        Magnitude m;
        m.exact_.reset();
        m.log2_lo_ = log2_lo_ * e;
        m.log2_hi_ = log2_hi_ * e;
        return m;
    }

    friend Magnitude operator*(const Magnitude& a, const Magnitude& b) {
        if (a.exact_ && b.exact_) return from_rational(*a.exact_ * *b.exact_);
        Magnitude m;
        m.exact_.reset();
        m.log2_lo_ = a.log2_lo_ + b.log2_lo_;
        m.log2_hi_ = a.log2_hi_ + b.log2_hi_;
        return m;
    }

private:
    static BigInt rational_bits(const Rational& r) {
        return BigInt(bit_length(numerator(r))) + BigInt(bit_length(denominator(r)));
    }

    std::optional<Rational> exact_;
    BigInt log2_lo_;
    BigInt log2_hi_;
};

// Deterministic minimum. When the order cannot be certified from the exact
// values or the brackets, the result is the (sound) bracket of the minimum,
// which loses exactness but never correctness.
inline Magnitude mag_min(const Magnitude& a, const Magnitude& b) {
    if (a.is_exact() && b.is_exact()) {
        return a.exact_value() <= b.exact_value() ? a : b;
    }
    if (a.log2_hi() <= b.log2_lo()) return a;
    if (b.log2_hi() <= a.log2_lo()) return b;
    if (a.is_exact()) {
        if (cmp_pow2(a.exact_value(), b.log2_lo()) <= 0) return a;
        if (cmp_pow2(a.exact_value(), b.log2_hi()) >= 0) return b;
    } else if (b.is_exact()) {
        if (cmp_pow2(b.exact_value(), a.log2_lo()) <= 0) return b;
        if (cmp_pow2(b.exact_value(), a.log2_hi()) >= 0) return a;
    }
    return Magnitude::from_bracket(std::min(a.log2_lo(), b.log2_lo()),
                                   std::min(a.log2_hi(), b.log2_hi()));
}

// Smallest e >= 0 with 2^e > R when R is exact; the bracket fallback
// hi + 1 is sound and reproducible, if not always minimal.
inline BigInt min_exponent_exceeding(const Magnitude& R) {
    BigInt e = R.is_exact() ? floor_log2(R.exact_value()) + 1 : R.log2_hi() + 1;
    if (e < 0) e = 0;
    return e;
}

// Smallest e >= 0 with 2^-e <= r when r is exact; bracket fallback -lo.
inline BigInt min_exponent_reciprocal_below(const Magnitude& r) {
    BigInt e = r.is_exact() ? -floor_log2(r.exact_value()) : -r.log2_lo();
    if (e < 0) e = 0;
    return e;
}

// Magnitude of base^e for e >= 0, base > 0. Rational bases are powered
// exactly while affordable; algebraic bases go through the 64th-root log
// bracket. Exact 2^(k) recognitions keep the power-of-two form.
inline Magnitude beta_power_magnitude(const AlgebraicReal& base, const BigInt& e) {
    if (e < 0) throw input_error("beta_power_magnitude: negative exponent");
    if (e == 0) return Magnitude::from_rational(Rational(1));
    if (const std::optional<Rational> v = base.exact_value()) {
        if (*v <= 0) throw input_error("beta_power_magnitude: base must be positive");
        const BigInt cost = e * (BigInt(bit_length(numerator(*v))) +
                                 BigInt(bit_length(denominator(*v))));
        if (cost <= BigInt(kExactBitBudget)) {
            return Magnitude::from_rational(pow_rational(*v, e, kMaterializeBitCap));
        }
        return Magnitude::from_bracket(e * floor_log2(*v), e * ceil_log2(*v));
    }
    const Log2Bracket lb = log2_bracket(base, 64);
    const BigInt scaled_lo = e * BigInt(lb.b);
    if (lb.exact) {
        if (scaled_lo % 64 == 0) return Magnitude::from_pow2(scaled_lo / 64);
        return Magnitude::from_bracket(floor_div(scaled_lo, 64),
                                       ceil_div(scaled_lo, 64));
    }
    const BigInt scaled_hi = e * (BigInt(lb.b) + 1);
    return Magnitude::from_bracket(floor_div(scaled_lo, 64),
                                   ceil_div(scaled_hi, 64));
}

// The canonical width-<=1/4 base window all deterministic value bounds use.
// For a rational base this is the point interval at the value.
inline RationalInterval base_window(const AlgebraicReal& base) {
    return base.refine_enclosure(Rational(1, 4));
}

namespace detail {

// Bit cost of summing |c_i| * endpoint^{e_i} over the representative,
// used as the gate between the exact path and the bracket path.
inline bool bp_sum_affordable(const BetaPolynomial& p, const Rational& endpoint) {
    const BigInt per_power = BigInt(bit_length(numerator(endpoint))) +
                             BigInt(bit_length(denominator(endpoint)));
    return p.degree() * per_power <= BigInt(kExactBitBudget);
}

inline Rational bp_endpoint_sum(const BetaPolynomial& p, const Rational& endpoint) {
    Rational sum = 0;
    for (const auto& [e, c] : p.terms()) {
        sum += Rational(boost::multiprecision::abs(c)) *
               pow_rational(endpoint, e, kMaterializeBitCap);
    }
    return sum;
}

} // namespace detail

// Upper bound on |p(beta)|: exact sum over the window's high endpoint while
// affordable, otherwise (sum of |c_i|) * beta^deg whose upper bracket end
// dominates the value. Requires a nonzero representative.
inline Magnitude bp_value_upper(const BetaPolynomial& p) {
    if (p.is_zero_rep()) throw input_error("bp_value_upper: zero representative");
    const RationalInterval win = base_window(p.base());
    if (win.lo <= 0) throw input_error("bp_value_upper: base must be positive");
    if (detail::bp_sum_affordable(p, win.hi)) {
        return Magnitude::from_rational(detail::bp_endpoint_sum(p, win.hi));
    }
    BigInt coeff_sum = 0;
    for (const auto& [e, c] : p.terms()) coeff_sum += boost::multiprecision::abs(c);
    return Magnitude::from_rational(Rational(coeff_sum)) *
           beta_power_magnitude(p.base(), p.degree());
}

// Lower bound on p(beta) for representatives with nonnegative coefficients:
// exact sum over the window's low endpoint while affordable, otherwise the
// leading term beta^deg alone, whose lower bracket end is certified.
inline Magnitude bp_value_lower(const BetaPolynomial& p) {
    if (p.is_zero_rep()) throw input_error("bp_value_lower: zero representative");
    if (!p.all_coeffs_nonnegative()) {
        throw input_error("bp_value_lower: mixed-sign representative");
    }
    const RationalInterval win = base_window(p.base());
    if (win.lo <= 0) throw input_error("bp_value_lower: base must be positive");
    if (detail::bp_sum_affordable(p, win.lo)) {
        return Magnitude::from_rational(detail::bp_endpoint_sum(p, win.lo));
    }
    return beta_power_magnitude(p.base(), p.degree());
}

} // namespace betaifs
