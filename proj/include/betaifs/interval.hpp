#pragma once

// Closed rational intervals with outward-directed arithmetic. Every bound
// is exact, so unlike floating-point interval libraries there is no rounding
// step: an operation's result interval contains the true image set exactly
// as computed.

#include "betaifs/numeric.hpp"

#include <algorithm>
#include <initializer_list>

namespace betaifs {

struct RationalInterval {
    Rational lo;
    Rational hi;

    RationalInterval() : lo(0), hi(0) {}
    RationalInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw input_error("RationalInterval: lo > hi");
    }
    static RationalInterval point(const Rational& v) { return {v, v}; }

    Rational width() const { return hi - lo; }
    Rational midpoint() const { return (lo + hi) / 2; }
    bool contains(const Rational& v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return lo <= 0 && 0 <= hi; }
    bool is_point() const { return lo == hi; }

    // -1 if entirely negative, +1 if entirely positive, 0 if undecided.
    int sign_certain() const {
        if (hi < 0) return -1;
        if (lo > 0) return 1;
        return 0;
    }
};

inline RationalInterval operator+(const RationalInterval& a, const RationalInterval& b) {
    return {a.lo + b.lo, a.hi + b.hi};
}

inline RationalInterval operator-(const RationalInterval& a, const RationalInterval& b) {
    return {a.lo - b.hi, a.hi - b.lo};
}

inline RationalInterval operator-(const RationalInterval& a) {
    return {-a.hi, -a.lo};
}

inline RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
    const Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi;
    const Rational p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}

inline RationalInterval operator*(const RationalInterval& a, const Rational& c) {
    return c >= 0 ? RationalInterval{a.lo * c, a.hi * c}
                  : RationalInterval{a.hi * c, a.lo * c};
}

inline RationalInterval operator+(const RationalInterval& a, const Rational& c) {
    return {a.lo + c, a.hi + c};
}

inline RationalInterval reciprocal(const RationalInterval& a) {
    if (a.contains_zero()) throw input_error("reciprocal: interval contains zero");
    return {1 / a.hi, 1 / a.lo};
}

inline RationalInterval operator/(const RationalInterval& a, const RationalInterval& b) {
    return a * reciprocal(b);
}

inline RationalInterval iv_abs(const RationalInterval& a) {
    if (a.lo >= 0) return a;
    if (a.hi <= 0) return -a;
    const Rational neg_lo = -a.lo;
    return {Rational(0), std::max(neg_lo, a.hi)};
}

// a^k for small k >= 0, with the even-power tightening around zero.
inline RationalInterval iv_pow(const RationalInterval& a, unsigned k) {
    if (k == 0) return RationalInterval::point(1);
    RationalInterval acc = a;
    for (unsigned i = 1; i < k; ++i) acc = acc * a;
    if (k % 2 == 0 && a.contains_zero()) {
        const RationalInterval m = iv_abs(a);
        RationalInterval tight = RationalInterval::point(1);
        for (unsigned i = 0; i < k; ++i) tight = tight * m;
        return {Rational(0), tight.hi};
    }
    return acc;
}

inline bool overlaps(const RationalInterval& a, const RationalInterval& b) {
    return a.lo <= b.hi && b.lo <= a.hi;
}

inline RationalInterval hull(const RationalInterval& a, const RationalInterval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

// Certified lower bound on |x - y| over all x in a, y in b (0 if they may meet).
inline Rational dist_lower(const RationalInterval& a, const RationalInterval& b) {
    const Rational g1 = b.lo - a.hi;
    const Rational g2 = a.lo - b.hi;
    const Rational g = std::max(g1, g2);
    return g > 0 ? g : Rational(0);
}

// Certified upper bound on |x - y| over all x in a, y in b.
inline Rational dist_upper(const RationalInterval& a, const RationalInterval& b) {
    const Rational d1 = a.hi - b.lo;
    const Rational d2 = b.hi - a.lo;
    return std::max(d1, d2);
}

// Smallest enclosing interval with endpoints on the dyadic grid 2^-bits.
// Used to replace heavy exact endpoints with cheap comparable keys.
inline RationalInterval round_outward(const RationalInterval& a, unsigned bits) {
    const BigInt scale = BigInt(1) << bits;
    const Rational s(scale);
    return {Rational(floor_rational(a.lo * s), scale),
            Rational(ceil_rational(a.hi * s), scale)};
}

} // namespace betaifs
