#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

using namespace betaifs;

namespace {

bool has_row(const VerifyReport& report, const std::string& kind) {
    for (const VerifyRow& row : report.rows) {
        if (row.kind == kind) return true;
    }
    return false;
}

const CheckRecord& find_check(const SynthesisCertificate& cert, const std::string& kind,
                              std::size_t k) {
    for (const CheckRecord& rec : cert.checks) {
        if (rec.kind == kind && rec.k == k) return rec;
    }
    FAIL("missing check record " + kind + " at stage " + std::to_string(k));
    throw std::logic_error("unreachable");
}

} // namespace

TEST_CASE("geometric depth-2 run freezes the whole transcript", "[synthesis]") {
    const AlgebraicReal two = testsupport::base_two();
    const SynthesisCertificate cert = synthesize(two, EpsilonSequence::geometric(Rational(1, 2)), 2);

    // The second element is pinned by the separation threshold (the epsilon
    // requirement alone would allow 2^2 >= 1/eps_2 = 4); the second t element
    // by the marker-doubling padding.
    REQUIRE(cert.s_exponents == std::vector<BigInt>{BigInt(0), BigInt(10)});
    REQUIRE(cert.t_exponents == std::vector<BigInt>{BigInt(0), BigInt(21)});
    REQUIRE(cert.s_exponents[1] >= 2);

    REQUIRE(cert.levels.size() == 2);
    CHECK(cert.levels[0].N == 2);
    CHECK(cert.levels[0].M == 4);
    CHECK(cert.levels[1].N == 11);
    CHECK(cert.levels[1].M == 22);

    REQUIRE(cert.separations.size() == 1);
    REQUIRE(cert.separations[0].c.is_exact());
    CHECK(cert.separations[0].c.exact_value() == Rational(1, 1026));
    CHECK(cert.separations[0].L == 3);
    REQUIRE(cert.separations[0].M1.is_exact());
    CHECK(cert.separations[0].M1.exact_value() == Rational(4));

    REQUIRE(cert.checks.size() == 15);
    const CheckRecord& eps_s = find_check(cert, "epsilon-s", 1);
    CHECK(eps_s.n == 2);
    CHECK(eps_s.lhs == 2);
    CHECK(eps_s.rhs == 10);
    const CheckRecord& sep_s = find_check(cert, "separation-s", 1);
    CHECK(sep_s.lhs == 10);
    const CheckRecord& gap_t = find_check(cert, "gap-t", 1);
    CHECK(gap_t.lhs == 11); // minimal e with 2^-e <= 1/1026
    CHECK(gap_t.rhs == 21);
    const CheckRecord& eps_t = find_check(cert, "epsilon-t", 1);
    CHECK(eps_t.n == 11);
    CHECK(eps_t.lhs == 11);
    const CheckRecord& lvl_m = find_check(cert, "level-m", 2);
    CHECK(lvl_m.lhs == 22);
    CHECK(lvl_m.rhs == 22);

    CHECK(cert.minpoly == parse_polynomial("x-2"));
    CHECK(cert.epsilon.spec_string() == "geom:1/2");
}

TEST_CASE("verification replays the geometric transcript including brute rows", "[synthesis]") {
    const AlgebraicReal two = testsupport::base_two();
    const SynthesisCertificate cert = synthesize(two, EpsilonSequence::geometric(Rational(1, 2)), 2);

    VerifyOptions options;
    options.brute_n_max = 6;
    const VerifyReport report = verify_certificate(cert, options);
    CHECK(report.pass);
    CHECK(report.first_failure.empty());

    CHECK(has_row(report, "garsia"));
    CHECK(has_row(report, "membership-s"));
    CHECK(has_row(report, "separation-replay"));
    CHECK(has_row(report, "tail-chain"));
    CHECK(has_row(report, "cover-initial"));
    CHECK(has_row(report, "check-count"));

    // Six brute rows, one per level, each certifying the measured gap.
    unsigned brute_rows = 0;
    for (const VerifyRow& row : report.rows) {
        if (row.kind == "brute-delta") {
            ++brute_rows;
            CHECK(row.pass);
        }
    }
    CHECK(brute_rows == 6);
}

TEST_CASE("superexponential depth-3 run scales in exponent space", "[synthesis]") {
    const AlgebraicReal two = testsupport::base_two();
    const SynthesisCertificate cert =
        synthesize(two, EpsilonSequence::super_exponential(Rational(1, 2)), 3);

    REQUIRE(cert.s_exponents ==
            std::vector<BigInt>{BigInt(0), BigInt(10), BigInt(14884)});
    REQUIRE(cert.t_exponents ==
            std::vector<BigInt>{BigInt(0), BigInt(121), BigInt(221861025)});
    REQUIRE(cert.levels.size() == 3);
    CHECK(cert.levels[1].N == 11);
    CHECK(cert.levels[1].M == 122);
    CHECK(cert.levels[2].N == 14895);
    CHECK(cert.levels[2].M == 221861147);

    // Marker interleaving, strictly increasing through the chain.
    for (std::size_t k = 0; k < cert.levels.size(); ++k) {
        const BigInt doubled = cert.levels[k].N * 2;
        CHECK(doubled <= cert.levels[k].M);
        if (k > 0) CHECK(cert.levels[k - 1].M < cert.levels[k].N);
    }

    REQUIRE(cert.separations.size() == 2);
    REQUIRE(cert.separations[0].c.is_exact());
    CHECK(cert.separations[0].c.exact_value() == Rational(1, 1026));
    CHECK(cert.separations[1].c.is_exact()); // ~15k-bit denominator still affordable

    const VerifyReport report = verify_certificate(cert);
    CHECK(report.pass);
    // The final covering stretch is too long for explicit rows, so the range
    // form must appear (its far end is exactly the consumed budget).
    CHECK(has_row(report, "cover-t-range"));
}

TEST_CASE("silver-base run keeps all convergent digits in the base set", "[synthesis]") {
    const AlgebraicReal silver = testsupport::base_silver();
    const SynthesisCertificate cert =
        synthesize(silver, EpsilonSequence::geometric(Rational(1, 2)), 2);

    REQUIRE(cert.s_exponents == std::vector<BigInt>{BigInt(0), BigInt(13)});
    REQUIRE(cert.t_exponents == std::vector<BigInt>{BigInt(0), BigInt(27)});
    CHECK(cert.levels[1].N == 14);
    CHECK(cert.levels[1].M == 28);
    REQUIRE(cert.separations[0].c.is_exact());
    CHECK(cert.separations[0].c.exact_value() == Rational(8192, 1220719509));

    const AlgebraicReal base = make_algebraic_real(cert.minpoly, cert.base_interval);
    for (const std::vector<BigInt>* exps : {&cert.s_exponents, &cert.t_exponents}) {
        const CFExponents cf(base, *exps);
        for (const ConvergentPair& pair : convergents(cf)) {
            CHECK(pair.p.coeffs_in_01());
            CHECK(pair.q.coeffs_in_01());
        }
    }

    CHECK(verify_certificate(cert).pass);
}

TEST_CASE("certificates serialize deterministically and round-trip", "[synthesis]") {
    const AlgebraicReal two = testsupport::base_two();
    const EpsilonSequence eps = EpsilonSequence::geometric(Rational(1, 2));

    const SynthesisCertificate first = synthesize(two, eps, 3);
    const SynthesisCertificate second = synthesize(testsupport::base_two(), eps, 3);
    const std::string text = write_certificate(first);
    REQUIRE(text == write_certificate(second));

    const SynthesisCertificate reread = read_certificate(text);
    CHECK(write_certificate(reread) == text);
    CHECK(verify_certificate(reread).pass);
    CHECK(reread.s_exponents == first.s_exponents);
    CHECK(reread.levels.size() == first.levels.size());
}

TEST_CASE("deep run records bracket-only separation constants", "[synthesis]") {
    const AlgebraicReal two = testsupport::base_two();
    const SynthesisCertificate cert =
        synthesize(two, EpsilonSequence::super_exponential(Rational(1, 2)), 4);

    REQUIRE(cert.separations.size() == 3);
    // By stage three the admissibility product outgrows the exact bit budget,
    // so the constant survives only as a dyadic bracket.
    CHECK_FALSE(cert.separations[2].c.is_exact());
    CHECK(cert.separations[2].c.log2_hi() < 0);

    const std::string text = write_certificate(cert);
    const SynthesisCertificate reread = read_certificate(text);
    REQUIRE_FALSE(reread.separations[2].c.is_exact());
    CHECK(reread.separations[2].c.log2_lo() == cert.separations[2].c.log2_lo());
    CHECK(reread.separations[2].c.log2_hi() == cert.separations[2].c.log2_hi());
    CHECK(write_certificate(reread) == text);

    CHECK(verify_certificate(cert).pass);
}

TEST_CASE("tampered certificates fail at the matching replay row", "[synthesis]") {
    const AlgebraicReal two = testsupport::base_two();
    const SynthesisCertificate cert = synthesize(two, EpsilonSequence::geometric(Rational(1, 2)), 2);

    SECTION("doubled separation constant") {
        SynthesisCertificate bad = cert;
        bad.separations[0].c =
            Magnitude::from_rational(bad.separations[0].c.exact_value() * 2);
        const VerifyReport report = verify_certificate(bad);
        CHECK_FALSE(report.pass);
        CHECK(report.first_failure.rfind("separation-replay", 0) == 0);
    }

    SECTION("edited check bound") {
        SynthesisCertificate bad = cert;
        bool edited = false;
        for (CheckRecord& rec : bad.checks) {
            if (rec.kind == "epsilon-s") {
                rec.lhs = rec.lhs + 1;
                edited = true;
                break;
            }
        }
        REQUIRE(edited);
        const VerifyReport report = verify_certificate(bad);
        CHECK_FALSE(report.pass);
        CHECK(report.first_failure.rfind("epsilon-s", 0) == 0);
    }

    SECTION("shrunk level marker breaks membership") {
        SynthesisCertificate bad = cert;
        bad.levels[1].N = bad.levels[1].N - 1;
        CHECK_FALSE(verify_certificate(bad).pass);
    }

    SECTION("dropped check record breaks the count") {
        SynthesisCertificate bad = cert;
        bad.checks.pop_back();
        const VerifyReport report = verify_certificate(bad);
        CHECK_FALSE(report.pass);
    }
}

TEST_CASE("malformed certificates and arguments are rejected", "[synthesis]") {
    const AlgebraicReal two = testsupport::base_two();
    const EpsilonSequence eps = EpsilonSequence::geometric(Rational(1, 2));

    CHECK_THROWS_AS(synthesize(two, eps, 1), input_error);
    CHECK_THROWS_AS(synthesize(two, eps, 7), resource_error);
    const AlgebraicReal three_halves = make_algebraic_real(
        parse_polynomial("2x-3"), {Rational(1), Rational(2)});
    CHECK_THROWS_AS(synthesize(three_halves, eps, 2), input_error);

    CHECK_THROWS_AS(read_certificate("{"), input_error);
    CHECK_THROWS_AS(read_certificate("{\"schema_version\": 99}"), input_error);

    const SynthesisCertificate cert = synthesize(two, eps, 2);
    SynthesisCertificate bad = cert;
    bad.separations.clear();
    CHECK_THROWS_AS(verify_certificate(bad), input_error);

    bad = cert;
    bad.t_exponents.pop_back();
    CHECK_THROWS_AS(verify_certificate(bad), input_error);

    nlohmann::ordered_json doc = certificate_to_json(cert);
    doc["s_exponents"][1] = "not-a-number";
    CHECK_THROWS_AS(certificate_from_json(doc), input_error);

    VerifyOptions options;
    options.brute_n_max = 99;
    CHECK_THROWS_AS(verify_certificate(cert, options), input_error);
}

TEST_CASE("extracted parameters are certified truncation tails", "[synthesis]") {
    const AlgebraicReal two = testsupport::base_two();
    const SynthesisCertificate cert = synthesize(two, EpsilonSequence::geometric(Rational(1, 2)), 2);

    const IFSParams params = extract_params(cert, 2);
    CHECK_FALSE(params.s.is_exact());
    CHECK_FALSE(params.t.is_exact());

    // Depth-2 s tail at base 2: between the second convergent 2^10/(2^10+1)
    // and its mediant with the first, (2^10+1)/(2^10+2).
    const RationalInterval s_hull = params.s.enclosure(Rational(1));
    CHECK(s_hull.lo == Rational(1024, 1025));
    CHECK(s_hull.hi == Rational(1025, 1026));
    const RationalInterval t_hull = params.t.enclosure(Rational(1));
    const Rational t_den = pow_rational(Rational(2), BigInt(21));
    const Rational t_lo = t_den / (t_den + 1);
    const Rational t_hi = (t_den + 1) / (t_den + 2);
    CHECK(t_hull.lo == t_lo);
    CHECK(t_hull.hi == t_hi);

    for (const RationalInterval* hull : {&s_hull, &t_hull}) {
        CHECK(hull->lo > 0);
        CHECK(hull->hi <= 1);
    }

    // The depth-1 truncation is the full tail of the opening element.
    const IFSParams shallow = extract_params(cert, 1);
    const RationalInterval first_tail = shallow.s.enclosure(Rational(1));
    CHECK(first_tail.lo == Rational(1, 2));
    CHECK(first_tail.hi == Rational(1));

    CHECK_THROWS_AS(extract_params(cert, 0), input_error);
    CHECK_THROWS_AS(extract_params(cert, 3), input_error);
}

TEST_CASE("refutation plays recorded constants against small relations", "[synthesis]") {
    const AlgebraicReal two = testsupport::base_two();
    const SynthesisCertificate cert = synthesize(two, EpsilonSequence::geometric(Rational(1, 2)), 4);
    REQUIRE(verify_certificate(cert).pass);

    SECTION("the identity relation s = t dies at the first stage past the ratio") {
        const RefutationReport report =
            refute_relation(cert, IntPolynomial{1}, IntPolynomial{1}, IntPolynomial{});
        CHECK(report.verdict == RefutationVerdict::contradiction);
        CHECK(report.k_used == 2);
        CHECK(report.lhs_bound < report.rhs_bound);
        const Rational half = report.rhs_bound / 2;
        CHECK(report.lhs_bound == half);
    }

    SECTION("a ratio beyond every recorded stage stays undecided") {
        const RefutationReport report =
            refute_relation(cert, IntPolynomial{10}, IntPolynomial{1}, IntPolynomial{});
        CHECK(report.verdict == RefutationVerdict::undecided);
        CHECK(report.k_used == 0);
    }

    SECTION("class containment alone is not enough when the ratio wins") {
        // f(2) = 4 sits inside P(2,2) and P(3,3), but no recorded stage
        // index exceeds the ratio bound.
        const RefutationReport report =
            refute_relation(cert, IntPolynomial{2, 1}, IntPolynomial{1}, IntPolynomial{});
        CHECK(report.verdict == RefutationVerdict::undecided);
        CHECK(report.k_used == 0);
    }

    SECTION("a divisor vanishing at the base is rejected") {
        CHECK_THROWS_AS(refute_relation(cert, IntPolynomial{1}, IntPolynomial{-2, 1},
                                        IntPolynomial{}),
                        input_error);
    }
}

TEST_CASE("every small-class relation with ratio under three is refuted", "[synthesis]") {
    const AlgebraicReal two = testsupport::base_two();
    const SynthesisCertificate cert = synthesize(two, EpsilonSequence::geometric(Rational(1, 2)), 4);

    const std::vector<IntPolynomial> h_samples = {
        IntPolynomial{}, IntPolynomial{1}, IntPolynomial{2, -2, 1}};

    unsigned refuted = 0;
    for (long long c2 = -2; c2 <= 2; ++c2) {
        for (long long c1 = -2; c1 <= 2; ++c1) {
            for (long long c0 = -2; c0 <= 2; ++c0) {
                const IntPolynomial g{c0, c1, c2};
                if (is_value_zero(BetaPolynomial(two, g))) continue;
                for (long long f2 = -2; f2 <= 2; ++f2) {
                    for (long long f1 = -2; f1 <= 2; ++f1) {
                        for (long long f0 = -2; f0 <= 2; ++f0) {
                            const IntPolynomial f{f0, f1, f2};
                            const Rational ub = detail::abs_ratio_upper(two, f, g);
                            if (ub >= 3) continue;
                            for (const IntPolynomial& h : h_samples) {
                                const RefutationReport report =
                                    refute_relation(cert, f, g, h);
                                // The recorded stages reach index 3, so every
                                // ratio under three must hit a usable stage.
                                REQUIRE(report.verdict == RefutationVerdict::contradiction);
                                REQUIRE(report.k_used >= 1);
                                REQUIRE(report.k_used <= 3);
                                REQUIRE(report.lhs_bound < report.rhs_bound);
                                ++refuted;
                            }
                        }
                    }
                }
            }
        }
    }
    // The sweep must have real coverage, not vacuously skip everything.
    CHECK(refuted > 3000);
}
