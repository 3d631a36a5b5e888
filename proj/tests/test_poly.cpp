#include "betaifs/poly.hpp"

#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace betaifs;

TEST_CASE("polynomial text parsing", "[poly]") {
    CHECK(parse_polynomial("x-2") == IntPolynomial({-2, 1}));
    CHECK(parse_polynomial("x^2-2x-1") == IntPolynomial({-1, -2, 1}));
    CHECK(parse_polynomial("3") == IntPolynomial({3}));
    CHECK(parse_polynomial("2x-5") == IntPolynomial({-5, 2}));
    CHECK(parse_polynomial("2*x - 5") == IntPolynomial({-5, 2}));
    CHECK(parse_polynomial("-x^3+4") == IntPolynomial({4, 0, 0, -1}));
    CHECK(parse_polynomial("x+x") == IntPolynomial({0, 2}));
    CHECK(parse_polynomial("x^2-x^2") == IntPolynomial({}));
    CHECK(parse_polynomial("  x ^ 2 ") == IntPolynomial({0, 0, 1}));

    CHECK_THROWS_AS(parse_polynomial(""), input_error);
    CHECK_THROWS_AS(parse_polynomial("1.5"), input_error);
    CHECK_THROWS_AS(parse_polynomial("x^-1"), input_error);
    CHECK_THROWS_AS(parse_polynomial("x x"), input_error);
    CHECK_THROWS_AS(parse_polynomial("+x"), input_error);
    CHECK_THROWS_AS(parse_polynomial("x+"), input_error);
    CHECK_THROWS_AS(parse_polynomial("y+1"), input_error);
}

TEST_CASE("polynomial formatting round-trips", "[poly]") {
    CHECK(format_polynomial(parse_polynomial("x^2-2x-1")) == "x^2-2x-1");
    CHECK(format_polynomial(IntPolynomial({3})) == "3");
    CHECK(format_polynomial(IntPolynomial({})) == "0");
    CHECK(format_polynomial(IntPolynomial({0, -1})) == "-x");
    CHECK(format_polynomial(IntPolynomial({1, 1})) == "x+1");
    CHECK(format_polynomial(IntPolynomial({-5, 2})) == "2x-5");

    testsupport::Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        const IntPolynomial p = testsupport::random_poly(rng, 6, 9);
        CHECK(parse_polynomial(format_polynomial(p)) == p);
    }
}

TEST_CASE("degree, height, and basic ring operations", "[poly]") {
    const IntPolynomial z;
    CHECK(z.degree() == -1);
    CHECK(z.height() == 0);
    CHECK(IntPolynomial({0, 0, 5}).degree() == 2);
    CHECK(IntPolynomial({-7, 2}).height() == 7);

    const IntPolynomial a({1, 2});     // 2x+1
    const IntPolynomial b({-1, 0, 3}); // 3x^2-1
    CHECK(a + b == IntPolynomial({0, 2, 3}));
    CHECK(a - a == IntPolynomial({}));
    CHECK(a * b == IntPolynomial({-1, -2, 3, 6}));
    CHECK(-a == IntPolynomial({-1, -2}));
    CHECK(a * BigInt(3) == IntPolynomial({3, 6}));
    CHECK(a.shifted_up(2) == IntPolynomial({0, 0, 1, 2}));
    CHECK(IntPolynomial::monomial(3) == IntPolynomial({0, 0, 0, 1}));
    CHECK(IntPolynomial::constant(BigInt(4)) == IntPolynomial({4}));
}

TEST_CASE("evaluation at rationals, integers, and intervals", "[poly]") {
    const IntPolynomial p({-1, -2, 1}); // x^2-2x-1
    CHECK(p.eval(Rational(3)) == 2);
    CHECK(p.eval(Rational(5, 2)) == Rational(1, 4));
    CHECK(p.eval(BigInt(10)) == 79);

    const RationalInterval x{Rational(2), Rational(3)};
    const RationalInterval v = p.eval(x);
    CHECK(v.contains(p.eval(Rational(2))));
    CHECK(v.contains(p.eval(Rational(5, 2))));
    CHECK(v.contains(p.eval(Rational(3))));
}

TEST_CASE("derivative, content, primitive part", "[poly]") {
    CHECK(IntPolynomial({-1, -2, 1}).derivative() == IntPolynomial({-2, 2}));
    CHECK(IntPolynomial({5}).derivative() == IntPolynomial({}));
    CHECK(IntPolynomial({2, 4, -6}).content() == 2);
    CHECK(IntPolynomial({0, -2}).primitive_part() == IntPolynomial({0, 1}));
    CHECK(IntPolynomial({2, 4, -6}).primitive_part() == IntPolynomial({-1, -2, 3}));
}

TEST_CASE("gcd, exact division, square-free part", "[poly]") {
    const IntPolynomial a = parse_polynomial("x^2-1");
    const IntPolynomial b = parse_polynomial("x^2-2x+1");
    CHECK(poly_gcd(a, b) == parse_polynomial("x-1"));
    CHECK(poly_gcd(a, parse_polynomial("x^2-2")).degree() == 0);

    CHECK(poly_divexact(a, parse_polynomial("x-1")) == parse_polynomial("x+1"));
    CHECK_THROWS_AS(poly_divexact(a, parse_polynomial("x-2")), input_error);
    CHECK_THROWS_AS(poly_divexact(a, IntPolynomial({})), input_error);

    // (x-1)^2 (x+2) = x^3 - 3x + 2
    const IntPolynomial cubed = parse_polynomial("x^3-3x+2");
    CHECK(square_free_part(cubed) == parse_polynomial("x^2+x-2"));
    CHECK(square_free_part(a) == a);
    CHECK_THROWS_AS(square_free_part(IntPolynomial({})), input_error);
}

TEST_CASE("ring laws on random operands", "[poly]") {
    testsupport::Rng rng(11);
    for (int i = 0; i < 30; ++i) {
        const IntPolynomial p = testsupport::random_poly(rng, 5, 20);
        const IntPolynomial q = testsupport::random_poly(rng, 5, 20);
        const IntPolynomial r = testsupport::random_poly(rng, 5, 20);
        CHECK(p + q == q + p);
        CHECK(p * q == q * p);
        CHECK((p + q) + r == p + (q + r));
        CHECK((p * q) * r == p * (q * r));
        CHECK(p * (q + r) == p * q + p * r);
    }
}

TEST_CASE("poly class membership", "[poly]") {
    const PolyClass cls{3, BigInt(5)};
    CHECK(cls.contains(parse_polynomial("5x^3-5")));
    CHECK_FALSE(cls.contains(parse_polynomial("x^4")));
    CHECK_FALSE(cls.contains(parse_polynomial("6x")));
    CHECK(cls.contains(IntPolynomial({}))); // zero: degree -1, height 0
}

TEST_CASE("Landau bound on the Mahler measure", "[poly]") {
    CHECK(landau_mahler_bound(parse_polynomial("x-2")) == Rational(2237, 1000));
    CHECK(landau_mahler_bound(parse_polynomial("x^2-2x-1")) == Rational(49, 20));
    CHECK(landau_mahler_bound(parse_polynomial("x")) == Rational(1));
    CHECK(landau_mahler_bound(parse_polynomial("2x-5")) == Rational(2693, 500));
    CHECK_THROWS_AS(landau_mahler_bound(IntPolynomial({})), input_error);

    // The bound dominates the 2-norm: check square against the sum of squares.
    testsupport::Rng rng(13);
    for (int i = 0; i < 40; ++i) {
        IntPolynomial p = testsupport::random_poly(rng, 6, 50);
        if (p.is_zero()) continue;
        BigInt s = 0;
        for (const BigInt& c : p.coeffs()) s += c * c;
        const Rational r = landau_mahler_bound(p);
        CHECK(r * r >= Rational(s));
    }
}
