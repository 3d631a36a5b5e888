#pragma once

// Explicit lower bounds for |f(beta)| over nonzero values of integer
// polynomials with bounded degree and height. The constant M is derived from
// the resultant argument: Res(minpoly, f) is a nonzero integer, each
// conjugate contributes at most (n+1)*H*max(1,|root|)^n, and Landau's
// inequality bounds the conjugate product without isolating complex roots.

#include "betaifs/algebraic.hpp"
#include "betaifs/numeric.hpp"
#include "betaifs/poly.hpp"

namespace betaifs {

struct GarsiaConstant {
    unsigned M = 1;       // the exponent constant: |f(beta)| >= M^-n * H^-M
    unsigned d = 1;       // degree of the minimal polynomial
    Rational landau;      // rational upper bound on the Mahler measure
    Rational beta_low;    // rational lower bound on beta used in the derivation
};

// Requires the root to be certified >= 2 by the width-1/4 refinement window;
// bases barely above 2 whose window dips below it are rejected by contract.
inline GarsiaConstant garsia_constant(const AlgebraicReal& beta) {
    GarsiaConstant gc;
    gc.d = static_cast<unsigned>(beta.minpoly().degree());
    gc.landau = landau_mahler_bound(beta.minpoly());
    const RationalInterval window = beta.refine_enclosure(Rational(1, 4));
    gc.beta_low = window.lo;
    if (gc.beta_low < 2) {
        throw input_error("garsia_constant: base not certified >= 2 at window width 1/4");
    }
    // M = max(1, d-1, ceil(2^(d-1) * landau / beta_low)); the 2^(d-1) factor
    // absorbs (n+1)^(d-1) <= (2^n)^(d-1) across all degrees n.
    const Rational ratio =
        Rational(BigInt(1) << (gc.d - 1)) * gc.landau / gc.beta_low;
    BigInt m = ceil_rational(ratio);
    if (m < 1) m = 1;
    if (m < gc.d - 1) m = gc.d - 1;
    gc.M = static_cast<unsigned>(m);
    return gc;
}

// M^-n * H^-M, the headline bound.
inline Rational lower_bound(const GarsiaConstant& gc, const PolyClass& cls) {
    if (cls.H < 1) throw input_error("lower_bound: height bound must be >= 1");
    const Rational mn = pow_rational(Rational(gc.M), BigInt(cls.n));
    const Rational hm = pow_rational(Rational(cls.H), BigInt(gc.M));
    return 1 / (mn * hm);
}

// The tighter intermediate bound [((n+1)H)^(d-1) * (landau/beta_low)^n]^-1
// straight from the resultant argument; always >= lower_bound.
inline Rational sharp_lower_bound(const AlgebraicReal& beta, const PolyClass& cls) {
    if (cls.H < 1) throw input_error("sharp_lower_bound: height bound must be >= 1");
    const GarsiaConstant gc = garsia_constant(beta);
    const Rational conj =
        pow_rational(Rational(BigInt(cls.n) + 1) * Rational(cls.H), BigInt(gc.d - 1));
    const Rational growth = pow_rational(gc.landau / gc.beta_low, BigInt(cls.n));
    return 1 / (conj * growth);
}

// Variant of the sharp bound valid for EVERY algebraic number (beta_low
// replaced by 1): |f(beta)| >= [((n+1)H)^(d-1) * landau^n]^-1 whenever
// f(beta) != 0. This is the termination guard for exact sign computation.
inline Rational sign_stopping_bound(const IntPolynomial& minpoly, const PolyClass& cls) {
    if (cls.H < 1) throw input_error("sign_stopping_bound: height bound must be >= 1");
    const unsigned d = static_cast<unsigned>(minpoly.degree());
    const Rational landau = landau_mahler_bound(minpoly);
    const Rational conj =
        pow_rational(Rational(BigInt(cls.n) + 1) * Rational(cls.H), BigInt(d - 1));
    const Rational growth = pow_rational(landau, BigInt(cls.n));
    return 1 / (conj * growth);
}

} // namespace betaifs
