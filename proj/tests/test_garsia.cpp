#include "betaifs/garsia.hpp"

#include "betaifs/beta_poly.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace betaifs;

namespace {

// Decides |value of f| >= bound with certainty (strictness of the underlying
// inequality guarantees termination either way).
bool certified_at_least(const BetaPolynomial& f, const Rational& bound) {
    Rational w = bound;
    while (true) {
        const RationalInterval iv = bp_enclosure(f, w);
        const Rational neg_hi = -iv.hi;
        const Rational neg_lo = -iv.lo;
        const Rational lb = std::max(iv.lo, neg_hi);
        if (lb >= bound) return true;
        const Rational ub = std::max(neg_lo, iv.hi);
        if (ub < bound) return false;
        w /= 4;
    }
}

} // namespace

TEST_CASE("constants for the shipped bases", "[garsia]") {
    const GarsiaConstant g2 = garsia_constant(testsupport::base_two());
    CHECK(g2.M == 2);
    CHECK(g2.d == 1);
    CHECK(g2.landau == Rational(2237, 1000));
    CHECK(g2.beta_low == 2);

    const GarsiaConstant gs = garsia_constant(testsupport::base_silver());
    CHECK(gs.M == 3);
    CHECK(gs.d == 2);
    CHECK(gs.landau == Rational(49, 20));
    CHECK(gs.beta_low == Rational(9, 4));

    const GarsiaConstant gh = garsia_constant(testsupport::base_five_halves());
    CHECK(gh.M == 3);
    CHECK(gh.d == 1);
    CHECK(gh.landau == Rational(2693, 500));
    CHECK(gh.beta_low == Rational(5, 2));

    // Bases below 2 are rejected for this derivation.
    const AlgebraicReal sqrt2 = make_algebraic_real(parse_polynomial("x^2-2"),
                                                    {Rational(1), Rational(2)});
    CHECK_THROWS_AS(garsia_constant(sqrt2), input_error);
}

TEST_CASE("headline lower bound values", "[garsia]") {
    GarsiaConstant gc;
    gc.M = 2;
    CHECK(lower_bound(gc, PolyClass{3, BigInt(5)}) == Rational(1, 200));
    CHECK(lower_bound(gc, PolyClass{0, BigInt(1)}) == Rational(1));
    gc.M = 3;
    CHECK(lower_bound(gc, PolyClass{1, BigInt(2)}) == Rational(1, 24));
    CHECK_THROWS_AS(lower_bound(gc, PolyClass{1, BigInt(0)}), input_error);

    // Monotone nonincreasing in degree and height.
    gc.M = 2;
    Rational prev = 2;
    for (unsigned n = 0; n <= 8; ++n) {
        const Rational v = lower_bound(gc, PolyClass{n, BigInt(7)});
        CHECK(v <= prev);
        prev = v;
    }
    prev = 2;
    for (long long h = 1; h <= 8; ++h) {
        const Rational v = lower_bound(gc, PolyClass{4, BigInt(h)});
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("sharp bound dominates the headline bound", "[garsia]") {
    const AlgebraicReal silver = testsupport::base_silver();
    // d=2, landau=49/20, beta_low=9/4: P(1,2) gives 1/(4 * (49/45)) = 45/196.
    const Rational sharp = sharp_lower_bound(silver, PolyClass{1, BigInt(2)});
    CHECK(sharp == Rational(45, 196));
    // |beta - 2| = 0.414... respects it: beta >= 2 + 45/196.
    CHECK(silver.cmp(Rational(2) + sharp) == 1);

    CHECK(sharp_lower_bound(silver, PolyClass{0, BigInt(1)}) == 1);

    const AlgebraicReal b2 = testsupport::base_two();
    CHECK(sharp_lower_bound(b2, PolyClass{3, BigInt(9)}) ==
          pow_rational(Rational(2000, 2237), BigInt(3)));

    const GarsiaConstant gs = garsia_constant(silver);
    const GarsiaConstant g2 = garsia_constant(b2);
    for (unsigned n = 0; n <= 7; ++n) {
        for (long long h = 1; h <= 9; h += 2) {
            const PolyClass cls{n, BigInt(h)};
            CHECK(sharp_lower_bound(silver, cls) >= lower_bound(gs, cls));
            CHECK(sharp_lower_bound(b2, cls) >= lower_bound(g2, cls));
        }
    }
}

TEST_CASE("sampled nonzero values respect both bounds", "[garsia]") {
    const AlgebraicReal bases[] = {testsupport::base_two(),
                                   testsupport::base_five_halves(),
                                   testsupport::base_silver()};
    testsupport::Rng rng(41);
    for (const AlgebraicReal& base : bases) {
        const GarsiaConstant gc = garsia_constant(base);
        const PolyClass cls{6, BigInt(50)};
        const Rational headline = lower_bound(gc, cls);
        const Rational sharp = sharp_lower_bound(base, cls);
        REQUIRE(sharp >= headline);
        int nonzero = 0;
        for (int i = 0; i < 2000; ++i) {
            const BetaPolynomial f(base, testsupport::random_poly(rng, 6, 50));
            if (is_value_zero(f)) continue;
            ++nonzero;
            CHECK(certified_at_least(f, sharp));
        }
        CHECK(nonzero > 1900);
    }
}

TEST_CASE("sign stopping bound is a valid floor for every base", "[garsia]") {
    // Valid even below 2, where garsia_constant refuses to work.
    const AlgebraicReal sqrt2 = make_algebraic_real(parse_polynomial("x^2-2"),
                                                    {Rational(1), Rational(2)});
    const Rational floor = sign_stopping_bound(sqrt2.minpoly(), PolyClass{1, BigInt(1)});
    CHECK(floor > 0);
    // |sqrt(2) - 1| = 0.414... >= floor.
    CHECK(certified_at_least(BetaPolynomial(sqrt2, parse_polynomial("x-1")), floor));

    testsupport::Rng rng(43);
    const AlgebraicReal silver = testsupport::base_silver();
    const Rational f65 = sign_stopping_bound(silver.minpoly(), PolyClass{6, BigInt(50)});
    for (int i = 0; i < 300; ++i) {
        const BetaPolynomial f(silver, testsupport::random_poly(rng, 6, 50));
        if (is_value_zero(f)) continue;
        CHECK(certified_at_least(f, f65));
    }
}
