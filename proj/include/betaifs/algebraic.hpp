#pragma once

// Real algebraic numbers as (square-free polynomial, isolating interval)
// pairs with certified, *deterministic* refinement.
//
// Determinism matters more here than in a typical root isolator: certificate
// replays must reproduce byte-identical rationals no matter how many times or
// in what order enclosures were refined beforehand. Refinement therefore
// always follows the canonical bisection path from the original isolating
// interval; the cache only remembers how far along that path we already are.

#include "betaifs/interval.hpp"
#include "betaifs/numeric.hpp"
#include "betaifs/poly.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <utility>

namespace betaifs {

class AlgebraicReal {
public:
    AlgebraicReal() = default;

    // Validates: nonconstant, square-free, sign change across the endpoints.
    // The polynomial is normalized to its primitive part with positive
    // leading coefficient. Minimality is presumed, not verified.
    static AlgebraicReal make(const IntPolynomial& minpoly,
                              const RationalInterval& isolating) {
        if (minpoly.degree() < 1) {
            throw input_error("make_algebraic_real: polynomial must be nonconstant");
        }
        IntPolynomial m = minpoly.primitive_part();
        {
            const IntPolynomial g = poly_gcd(m, m.derivative());
            if (g.degree() != 0) {
                throw input_error("make_algebraic_real: polynomial is not square-free");
            }
        }
        const Rational at_lo = m.eval(isolating.lo);
        const Rational at_hi = m.eval(isolating.hi);
        if (at_lo == 0 || at_hi == 0 || (at_lo < 0) == (at_hi < 0)) {
            throw input_error("make_algebraic_real: interval does not isolate a root "
                              "(no sign change)");
        }
        AlgebraicReal x;
        x.core_ = std::make_shared<Core>();
        x.core_->minpoly = std::move(m);
        x.core_->original = isolating;
        x.core_->sign_lo = at_lo < 0 ? -1 : 1;
        x.core_->cache = isolating;
        return x;
    }

    bool valid() const { return core_ != nullptr; }
    const IntPolynomial& minpoly() const { return core_->minpoly; }
    const RationalInterval& isolating() const { return core_->original; }

    // Identity of the underlying shared state; ring operations on
    // BetaPolynomials require operands to share it.
    const void* id() const { return core_.get(); }

    // Exact value when the defining polynomial is linear.
    std::optional<Rational> exact_value() const {
        if (core_->minpoly.degree() == 1) {
            return Rational(-core_->minpoly[0], core_->minpoly[1]);
        }
        return std::nullopt;
    }

    RationalInterval enclosure() const {
        std::lock_guard<std::mutex> lock(core_->mu);
        return core_->cache;
    }

    // Nested interval of width <= target containing the root. Replays the
    // canonical bisection path, so the result depends only on the original
    // interval and the target, never on refinement history.
    RationalInterval refine_enclosure(const Rational& target_width) const {
        if (target_width <= 0) {
            throw input_error("refine_enclosure: target width must be positive");
        }
        std::lock_guard<std::mutex> lock(core_->mu);
        RationalInterval iv = core_->cache;
        // Keeping the half that preserves the sign change leaves the sign at
        // the low endpoint invariant across the whole path.
        while (!iv.is_point() && iv.width() > target_width) {
            const Rational mid = iv.midpoint();
            const Rational v = core_->minpoly.eval(mid);
            if (v == 0) {
                iv = RationalInterval::point(mid);
                break;
            }
            if ((v < 0 ? -1 : 1) == core_->sign_lo) {
                iv = RationalInterval(mid, iv.hi);
            } else {
                iv = RationalInterval(iv.lo, mid);
            }
        }
        core_->cache = iv;
        return iv;
    }

    // Sign of the root minus r: -1, 0, +1. Exact.
    int cmp(const Rational& r) const {
        {
            std::lock_guard<std::mutex> lock(core_->mu);
            if (r < core_->cache.lo) return 1;
            if (r > core_->cache.hi) return -1;
        }
        if (core_->minpoly.eval(r) == 0) {
            // r is a root of the (presumed minimal) polynomial inside the
            // isolating interval, hence it is the root.
            return 0;
        }
        // r is not the root, so bisection eventually expels it.
        Rational w = enclosure().width();
        while (true) {
            w /= 2;
            const RationalInterval iv = refine_enclosure(w);
            if (r < iv.lo) return 1;
            if (r > iv.hi) return -1;
            if (iv.is_point()) return iv.lo == r ? 0 : (iv.lo > r ? 1 : -1);
        }
    }

    bool operator>=(const Rational& r) const { return cmp(r) >= 0; }

private:
    struct Core {
        IntPolynomial minpoly;
        RationalInterval original;
        int sign_lo = 0; // sign of minpoly at original.lo
        mutable std::mutex mu;
        // Invariant: cache is a point on the canonical bisection path from
        // original, so every refinement just continues the same path.
        mutable RationalInterval cache;

        Core() = default;
    };

    std::shared_ptr<Core> core_;
};

inline AlgebraicReal make_algebraic_real(const IntPolynomial& minpoly,
                                         const RationalInterval& isolating) {
    return AlgebraicReal::make(minpoly, isolating);
}

inline RationalInterval refine_enclosure(const AlgebraicReal& x,
                                         const Rational& target_width) {
    return x.refine_enclosure(target_width);
}

// log2(x) in [b/a, (b+1)/a], or exactly b/a when x^a is a power of two.
struct Log2Bracket {
    BigInt b;
    unsigned a = 64;
    bool exact = false;

    Rational lower() const { return Rational(b, a); }
    Rational upper() const { return exact ? Rational(b, a) : Rational(b + 1, a); }
};

// Certified b = floor(a*log2(x)) for x > 0, via comparing x^a against powers
// of two. When x^a lands exactly on 2^c (e.g. x = 2^(3/2), a = 2), the
// straddle can never be refined away; that case is detected through the
// minimal polynomial and reported as exact.
inline Log2Bracket log2_bracket(const AlgebraicReal& x, unsigned a = 64) {
    if (a == 0) throw input_error("log2_bracket: denominator must be positive");
    // An already-collapsed point enclosure leaves zero width; any positive
    // start works because refinement no-ops once the target is met.
    Rational w = x.enclosure().width();
    if (w <= 0) w = 1;
    while (true) {
        const RationalInterval iv = x.refine_enclosure(w);
        if (iv.hi <= 0) throw input_error("log2_bracket: argument is not positive");
        if (iv.is_point()) {
            const Rational v = pow_rational(Rational(iv.lo), BigInt(a));
            if (v <= 0) throw input_error("log2_bracket: argument is not positive");
            return {floor_log2(v), a, is_power_of_two(v)};
        }
        if (iv.lo > 0) {
            const RationalInterval p = iv_pow(iv, a);
            // The root is strictly interior to a non-point interval, so the
            // hi endpoint itself is unattained and may be nudged off a
            // power-of-two boundary.
            const BigInt lo2 = floor_log2(p.lo);
            const BigInt hi2 = is_power_of_two(p.hi) ? floor_log2(p.hi) - 1
                                                     : floor_log2(p.hi);
            if (lo2 == hi2) return {lo2, a, false};
            if (hi2 - lo2 == 1) {
                // The straddled boundary 2^hi2 may be an exact hit: x^a = 2^hi2
                // iff the minimal polynomial divides y^a - 2^hi2 (minimality
                // presumed). Otherwise further refinement resolves the straddle.
                IntPolynomial probe = IntPolynomial::monomial(a);
                const Rational c = pow2_rational(hi2);
                probe = probe * denominator(c) -
                        IntPolynomial::constant(numerator(c));
                if (poly_gcd(x.minpoly(), probe) == x.minpoly()) {
                    return {hi2, a, true};
                }
            }
        }
        w /= 4;
    }
}

} // namespace betaifs
