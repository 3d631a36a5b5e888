#include "betaifs/epsilon.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace betaifs;

TEST_CASE("values and validation per kind", "[epsilon]") {
    const EpsilonSequence g = EpsilonSequence::geometric(Rational(1, 2));
    CHECK(g.value_at(1) == Rational(1, 2));
    CHECK(g.value_at(5) == Rational(1, 32));

    const EpsilonSequence s = EpsilonSequence::super_exponential(Rational(1, 2));
    CHECK(s.value_at(1) == Rational(1, 2));
    CHECK(s.value_at(3) == Rational(1, 512)); // (1/2)^9

    const EpsilonSequence f = EpsilonSequence::factorial();
    CHECK(f.value_at(1) == 1);
    CHECK(f.value_at(4) == Rational(1, 24));
    CHECK(f.value_at(6) == Rational(1, 720));

    const EpsilonSequence t = EpsilonSequence::table(
        {Rational(1, 2), Rational(7, 10), Rational(3, 10)});
    CHECK(t.value_at(2) == Rational(7, 10));
    CHECK(t.value_at(9) == Rational(3, 10)); // repeat-last tail

    CHECK_THROWS_AS(g.value_at(0), input_error);
    CHECK_THROWS_AS(EpsilonSequence::geometric(Rational(0)), input_error);
    CHECK_THROWS_AS(EpsilonSequence::table({}), input_error);
    CHECK_THROWS_AS(EpsilonSequence::table({Rational(1), Rational(-1, 2)}),
                    input_error);

    // Materialization guards on astronomical indices.
    CHECK_THROWS_AS(g.value_at(BigInt(1) << 40), resource_error);
    CHECK_THROWS_AS(f.value_at(BigInt(1) << 40), resource_error);
}

TEST_CASE("running-minimum normalization", "[epsilon]") {
    const EpsilonSequence t = normalize_epsilon(EpsilonSequence::table(
        {Rational(1, 2), Rational(7, 10), Rational(3, 10)}));
    CHECK(t.is_normalized());
    CHECK(t.entries() == std::vector<Rational>{Rational(1, 2), Rational(1, 2),
                                               Rational(3, 10)});
    CHECK(t.value_at(2) == Rational(1, 2));
    CHECK(t.value_at(100) == Rational(3, 10));

    // Idempotent.
    CHECK(normalize_epsilon(t) == t);

    // Already-decreasing kinds pass through unchanged apart from the flag.
    const EpsilonSequence g = normalize_epsilon(EpsilonSequence::geometric(Rational(1, 2)));
    CHECK(g.value_at(5) == Rational(1, 32));

    // Constant-1 table stays constant 1.
    const EpsilonSequence one = normalize_epsilon(EpsilonSequence::table({Rational(1)}));
    CHECK(one.value_at(7) == 1);

    // A ratio >= 1 normalizes to the constant first value.
    const EpsilonSequence inc = normalize_epsilon(EpsilonSequence::geometric(Rational(3, 2)));
    CHECK(inc.value_at(1) == Rational(3, 2));
    CHECK(inc.value_at(10) == Rational(3, 2));
}

TEST_CASE("required exponents in the dyadic calculus", "[epsilon]") {
    const EpsilonSequence g = normalize_epsilon(EpsilonSequence::geometric(Rational(1, 2)));
    CHECK(g.required_exponent(1) == 1);
    CHECK(g.required_exponent(11) == 11);
    // Power-of-two ratios stay exact past any materialization horizon.
    const BigInt big = BigInt("49000000000000000");
    CHECK(g.required_exponent(big) == big);

    const EpsilonSequence s =
        normalize_epsilon(EpsilonSequence::super_exponential(Rational(1, 2)));
    CHECK(s.required_exponent(2) == 4);
    CHECK(s.required_exponent(11) == 121);
    CHECK(s.required_exponent(big) == big * big);

    // Non-dyadic ratio: exact at small n, sound per-step bound at large n.
    const EpsilonSequence third = normalize_epsilon(EpsilonSequence::geometric(Rational(1, 3)));
    CHECK(third.required_exponent(1) == 2);  // 2^-2 <= 1/3 < 2^-1
    CHECK(third.required_exponent(4) == 7);  // 1/81: 2^-7 <= 1/81 < 2^-6
    CHECK(third.required_exponent(BigInt(1) << 30) == BigInt(2) << 30);

    const EpsilonSequence f = normalize_epsilon(EpsilonSequence::factorial());
    CHECK(f.required_exponent(1) == 0);
    CHECK(f.required_exponent(2) == 1);
    CHECK(f.required_exponent(4) == 5);
    CHECK(f.required_exponent(5) == 8);
    CHECK(f.required_exponent(8) == 17);
    CHECK(f.required_exponent(9) == 21);
    // Closed form reaches astronomical indices without materializing n!.
    CHECK(f.required_exponent(BigInt(1) << 20) == (BigInt(1) << 20) * 20 - (BigInt(1) << 20) + 1);

    const EpsilonSequence t = normalize_epsilon(EpsilonSequence::table(
        {Rational(1, 2), Rational(7, 10), Rational(3, 10)}));
    CHECK(t.required_exponent(1) == 1);
    CHECK(t.required_exponent(2) == 1);  // normalized to 1/2
    CHECK(t.required_exponent(3) == 2);  // 2^-2 <= 3/10
    CHECK(t.required_exponent(50) == 2); // tail

    // Raw sequences refuse the query: normalization is part of the contract.
    CHECK_THROWS_AS(EpsilonSequence::geometric(Rational(1, 2)).required_exponent(1),
                    input_error);
}

TEST_CASE("spec strings round-trip", "[epsilon]") {
    const char* specs[] = {"geom:1/2", "superexp:1/2", "factorial",
                           "table:1/2,7/10,3/10", "geom:3/4"};
    for (const char* text : specs) {
        const EpsilonSequence e = EpsilonSequence::parse(text);
        CHECK(e.spec_string() == text);
        CHECK(EpsilonSequence::parse(e.spec_string()) == e);
    }
    // Integral entries serialize with the uniform denominator.
    CHECK(EpsilonSequence::parse("table:1").spec_string() == "table:1/1");

    CHECK_THROWS_AS(EpsilonSequence::parse(""), input_error);
    CHECK_THROWS_AS(EpsilonSequence::parse("geometric:1/2"), input_error);
    CHECK_THROWS_AS(EpsilonSequence::parse("geom:0"), input_error);
    CHECK_THROWS_AS(EpsilonSequence::parse("table:"), input_error);
    CHECK_THROWS_AS(EpsilonSequence::parse("table:1/2,,3"), input_error);
}
