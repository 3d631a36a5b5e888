#pragma once

// Staged choice of the two continued-fraction element lists so the translation
// pair (s, t) keeps every level-n cylinder gap below eps_n while the recorded
// separation constants rule out exact coincidences. Each stage picks the
// minimal power exponent clearing four requirements at once (epsilon budget,
// separation admissibility, growth, support disjointness) plus the padding
// that keeps the level markers strictly interleaved; every inequality consumed
// along the way is stored in the certificate as an integer comparison in the
// dyadic calculus, so a verifier replays the whole construction without
// re-deriving any bound.
//
// The certificate also powers two consumers: parameter extraction (truncation
// tail hulls feeding the cylinder machinery) and relation refutation (playing
// a recorded separation constant against the k-th tail approximation).

#include "betaifs/algebraic.hpp"
#include "betaifs/beta_poly.hpp"
#include "betaifs/cfrac.hpp"
#include "betaifs/epsilon.hpp"
#include "betaifs/garsia.hpp"
#include "betaifs/ifs.hpp"
#include "betaifs/interval.hpp"
#include "betaifs/magnitude.hpp"
#include "betaifs/numeric.hpp"
#include "betaifs/poly.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace betaifs {

// Convergent degrees square from one stage to the next (the epsilon budget at
// a level marker feeds the next exponent), so depth is capped and exponents
// are cut off once their bit length says a later stage cannot be stored.
inline constexpr std::size_t kSynthesisDepthCap = 6;
inline constexpr std::size_t kSynthesisExponentBitCap = 4096;

// Caps for the replay: explicit per-level domination rows stop after this
// many levels (a single range row covers the rest), and brute-force gap rows
// reuse the cylinder enumeration, so they inherit its level cap.
inline constexpr std::size_t kVerifyExplicitRowCap = 4096;
inline constexpr std::size_t kVerifyTruncationExponentCap = 8192;

struct LevelMarker {
    std::size_t k = 0;
    BigInt N;
    BigInt M;
};

struct SeparationRecord {
    std::size_t k = 0;
    Magnitude c;
    BigInt L;
    Magnitude M1;
};

// One consumed inequality, always normalized to lhs <= rhs over integers:
// requirements and thresholds are minimal dyadic exponents, level bounds are
// the markers themselves. `k` is the stage, `n` an epsilon index when the
// requirement depends on one (0 otherwise).
struct CheckRecord {
    std::string kind;
    std::size_t k = 0;
    BigInt n;
    BigInt lhs;
    BigInt rhs;
};

struct SynthesisCertificate {
    IntPolynomial minpoly;
    RationalInterval base_interval;
    GarsiaConstant garsia;
    EpsilonSequence epsilon = EpsilonSequence::factorial();
    std::vector<BigInt> s_exponents;
    std::vector<BigInt> t_exponents;
    std::vector<LevelMarker> levels;
    std::vector<SeparationRecord> separations;
    std::vector<CheckRecord> checks;

    std::size_t depth() const { return s_exponents.size(); }
};

enum class RefutationVerdict { contradiction, undecided };

struct RefutationReport {
    IntPolynomial f, g, h;
    std::size_t k_used = 0; // 0 when no recorded stage is deep enough
    Rational lhs_bound = Rational(0);
    Rational rhs_bound = Rational(0);
    RefutationVerdict verdict = RefutationVerdict::undecided;
};

struct VerifyOptions {
    unsigned brute_n_max = 0;
    std::size_t explicit_row_cap = kVerifyExplicitRowCap;
};

struct VerifyRow {
    std::string kind;
    std::size_t k = 0;
    BigInt n;
    std::string lhs;
    std::string rhs;
    bool pass = true;
};

struct VerifyReport {
    bool pass = true;
    std::vector<VerifyRow> rows;
    std::string first_failure;

    void add(VerifyRow row) {
        if (!row.pass && pass) {
            pass = false;
            first_failure = row.kind + " (stage " + std::to_string(row.k) +
                            ", level " + row.n.str() + ")";
        }
        rows.push_back(std::move(row));
    }
};

namespace detail {

// Minimal next exponent the growth criterion accepts for element k+1, from
// the joint degree/height class of the k-th convergent pair (matching the
// dyadic threshold check_irrationality_growth replays later).
inline BigInt growth_requirement(std::size_t k, const ConvergentPair& pair,
                                 const GarsiaConstant& gc) {
    BigInt d = 1;
    for (const BetaPolynomial* poly : {&pair.p, &pair.q}) {
        if (poly->degree() > d) d = poly->degree();
        if (poly->height() > d) d = poly->height();
    }
    return BigInt(k) * d * ceil_log2(BigInt(gc.M)) + BigInt(gc.M) * ceil_log2(d);
}

// Keeping the shifted support clear of the carried-over convergent keeps all
// coefficients in {0, 1}: the new element's exponent must exceed both degrees
// two steps back.
inline BigInt disjointness_requirement(const ConvergentPair& prev) {
    BigInt d = prev.p.degree();
    const BigInt dq = prev.q.degree();
    if (dq > d) d = dq;
    if (d < 0) d = 0;
    return d + 1;
}

inline BigInt level_from_pair(const ConvergentPair& pair) {
    BigInt d = pair.p.degree();
    const BigInt dq = pair.q.degree();
    if (dq > d) d = dq;
    return d + 1;
}

// The serialized base interval must re-isolate the root on replay. A point
// enclosure (a rational root already pinned by earlier refinement) is widened
// until reconstruction both succeeds and lands on the same value.
inline RationalInterval isolating_interval_for(const AlgebraicReal& x) {
    const RationalInterval iv = x.enclosure();
    if (iv.lo < iv.hi) return iv;
    const Rational v = iv.lo;
    Rational w(1, 2);
    for (int round = 0; round < 128; ++round) {
        const RationalInterval cand(v - w, v + w);
        try {
            if (make_algebraic_real(x.minpoly(), cand).cmp(v) == 0) return cand;
        } catch (const input_error&) {
        }
        w /= 2;
    }
    throw resource_error("synthesize: could not widen a point enclosure back "
                         "into an isolating interval");
}

// Sound one-sided comparison: true only when a <= b is certain from the
// exact values or the dyadic brackets.
inline bool mag_leq_certified(const Magnitude& a, const Magnitude& b) {
    if (a.is_exact() && b.is_exact()) return a.exact_value() <= b.exact_value();
    if (a.is_exact()) return cmp_pow2(a.exact_value(), b.log2_lo()) <= 0;
    if (b.is_exact()) return cmp_pow2(b.exact_value(), a.log2_hi()) >= 0;
    return a.log2_hi() <= b.log2_lo();
}

inline bool mag_identical(const Magnitude& a, const Magnitude& b) {
    if (a.is_exact() != b.is_exact()) return false;
    if (a.is_exact()) return a.exact_value() == b.exact_value();
    return a.log2_lo() == b.log2_lo() && a.log2_hi() == b.log2_hi();
}

inline std::string mag_string(const Magnitude& m) {
    if (m.is_exact()) return format_rational(m.exact_value());
    return "2^[" + m.log2_lo().str() + "," + m.log2_hi().str() + "]";
}

// Minimal e with 2^-e <= value/k, the budget the t-side element must clear
// so the tail stays within the k-th separation allowance.
inline BigInt gap_requirement(const Magnitude& c, std::size_t k) {
    return min_exponent_reciprocal_below(
        c * Magnitude::from_rational(Rational(BigInt(1), BigInt(k))));
}

inline void push_check(SynthesisCertificate& cert, std::string kind, std::size_t k,
                       BigInt n, BigInt lhs, BigInt rhs) {
    cert.checks.push_back({std::move(kind), k, std::move(n), std::move(lhs),
                           std::move(rhs)});
}

} // namespace detail

// Builds the depth-K certificate for the given base and gap budget. The two
// element lists start at the fixed first element (exponent 0); each stage
// appends one element per side, choosing the minimal exponent that satisfies
// every requirement, then derives the next level markers from the convergent
// degrees. Deterministic by construction: identical inputs replay the same
// transcript.
inline SynthesisCertificate synthesize(const AlgebraicReal& beta,
                                       const EpsilonSequence& eps_in,
                                       std::size_t depth) {
    if (depth < 2) throw input_error("synthesize: depth must be at least 2");
    if (depth > kSynthesisDepthCap) {
        throw resource_error("synthesize: depth " + std::to_string(depth) +
                             " exceeds cap " + std::to_string(kSynthesisDepthCap) +
                             " (convergent degrees square per stage)");
    }
    if (beta.cmp(Rational(2)) < 0) {
        throw input_error("synthesize: base must be at least 2");
    }

    SynthesisCertificate cert;
    cert.minpoly = beta.minpoly();
    cert.garsia = garsia_constant(beta);
    cert.epsilon = eps_in.is_normalized() ? eps_in : normalize_epsilon(eps_in);
    cert.base_interval = detail::isolating_interval_for(beta);

    CFExponents s_cf(beta, {BigInt(0)});
    CFExponents t_cf(beta, {BigInt(0)});
    std::vector<ConvergentPair> sp = convergents(s_cf);
    std::vector<ConvergentPair> tp = convergents(t_cf);

    // First markers: the smallest admissible opening level on the s side and
    // the padded t-side marker that already satisfies the doubling rule.
    {
        LevelMarker first;
        first.k = 1;
        first.N = 2;
        first.M = 4;
        detail::push_check(cert, "membership-s", 1, BigInt(0),
                           detail::level_from_pair(sp[1]), first.N);
        detail::push_check(cert, "membership-t", 1, BigInt(0),
                           detail::level_from_pair(tp[1]), first.M);
        BigInt doubled = first.N * 2;
        detail::push_check(cert, "level-m", 1, BigInt(0), std::move(doubled),
                           first.M);
        cert.levels.push_back(std::move(first));
    }

    const auto budget_guard = [&](const BigInt& e, const char* side, std::size_t stage) {
        if (BigInt(bit_length(e)) > BigInt(kSynthesisExponentBitCap)) {
            throw resource_error(std::string("synthesize: ") + side + " exponent at stage " +
                                 std::to_string(stage) + " needs " +
                                 std::to_string(bit_length(e)) +
                                 " bits; transcript stops at the previous stage");
        }
    };

    for (std::size_t stage = 1; stage < depth; ++stage) {
        const BigInt& level_n = cert.levels.back().N;
        const BigInt& level_m = cert.levels.back().M;

        // s side, element stage+1: gap budget at the opening level for the
        // first stage, at the previous t marker afterwards.
        const BigInt eps_idx = stage == 1 ? level_n : level_m;
        const BigInt eps_req = cert.epsilon.required_exponent(eps_idx);
        const PolyClass cls{static_cast<unsigned>(stage), BigInt(stage)};
        const BetaRational multiplier(tp[stage].p, tp[stage].q);
        const SeparationResult probe = separation_choose(s_cf, cls, multiplier);
        const BigInt growth_req = detail::growth_requirement(stage, sp[stage], cert.garsia);
        const BigInt disjoint_req = detail::disjointness_requirement(sp[stage - 1]);
        BigInt pad_req = level_m - sp[stage].q.degree();
        if (pad_req < 0) pad_req = 0;

        BigInt e = eps_req;
        e = std::max(e, probe.next_exponent);
        e = std::max(e, growth_req);
        e = std::max(e, disjoint_req);
        e = std::max(e, pad_req);
        budget_guard(e, "s-side", stage);

        const SeparationResult sep = separation_at_exponent(s_cf, cls, multiplier, e);
        cert.separations.push_back({stage, sep.c, sep.L, sep.M1});
        s_cf.exps.push_back(e);
        sp = convergents(s_cf);
        BigInt next_n = detail::level_from_pair(sp[stage + 1]);

        detail::push_check(cert, "epsilon-s", stage, eps_idx, eps_req, e);
        detail::push_check(cert, "separation-s", stage, BigInt(0),
                           probe.next_exponent, e);
        detail::push_check(cert, "growth-s", stage, BigInt(0), growth_req, e);
        detail::push_check(cert, "disjoint-s", stage, BigInt(0), disjoint_req, e);
        detail::push_check(cert, "membership-s", stage + 1, BigInt(0), next_n, next_n);
        {
            BigInt above = level_m + 1;
            detail::push_check(cert, "level-n", stage + 1, BigInt(0),
                               std::move(above), next_n);
        }

        // t side, element stage+1: the budget is the tighter of the epsilon
        // value at the freshly derived s marker and the separation allowance
        // c/stage, plus the doubling padding for the next t marker.
        const BigInt eps_t_req = cert.epsilon.required_exponent(next_n);
        const BigInt gap_req = detail::gap_requirement(sep.c, stage);
        const BigInt growth_t_req = detail::growth_requirement(stage, tp[stage], cert.garsia);
        const BigInt disjoint_t_req = detail::disjointness_requirement(tp[stage - 1]);
        BigInt pad_t_req = next_n * 2 - 1 - tp[stage].q.degree();
        if (pad_t_req < 0) pad_t_req = 0;

        BigInt et = eps_t_req;
        et = std::max(et, gap_req);
        et = std::max(et, growth_t_req);
        et = std::max(et, disjoint_t_req);
        et = std::max(et, pad_t_req);
        budget_guard(et, "t-side", stage);

        t_cf.exps.push_back(et);
        tp = convergents(t_cf);
        BigInt next_m = detail::level_from_pair(tp[stage + 1]);

        detail::push_check(cert, "epsilon-t", stage, next_n, eps_t_req, et);
        detail::push_check(cert, "gap-t", stage, BigInt(0), gap_req, et);
        detail::push_check(cert, "growth-t", stage, BigInt(0), growth_t_req, et);
        detail::push_check(cert, "disjoint-t", stage, BigInt(0), disjoint_t_req, et);
        detail::push_check(cert, "membership-t", stage + 1, BigInt(0), next_m, next_m);
        {
            BigInt doubled = next_n * 2;
            detail::push_check(cert, "level-m", stage + 1, BigInt(0),
                               std::move(doubled), next_m);
        }

        LevelMarker marker;
        marker.k = stage + 1;
        marker.N = std::move(next_n);
        marker.M = std::move(next_m);
        cert.levels.push_back(std::move(marker));
    }

    cert.s_exponents = std::move(s_cf.exps);
    cert.t_exponents = std::move(t_cf.exps);
    return cert;
}

namespace detail {

// Structural screen shared by the certificate consumers: sizes, stage
// numbering, and the fixed first elements. Anything broken here is a
// malformed certificate rather than a failed replay.
inline void validate_certificate_shape(const SynthesisCertificate& cert) {
    const std::size_t depth = cert.s_exponents.size();
    if (depth < 2) throw input_error("certificate: depth must be at least 2");
    if (cert.t_exponents.size() != depth) {
        throw input_error("certificate: element lists must have equal length");
    }
    if (cert.levels.size() != depth) {
        throw input_error("certificate: one level marker per stage required");
    }
    if (cert.separations.size() + 1 != depth) {
        throw input_error("certificate: one separation record per completed stage required");
    }
    if (cert.s_exponents.front() != 0 || cert.t_exponents.front() != 0) {
        throw input_error("certificate: both element lists must start at exponent 0");
    }
    for (std::size_t i = 0; i < depth; ++i) {
        if (cert.levels[i].k != i + 1) {
            throw input_error("certificate: level markers must be numbered consecutively");
        }
    }
    for (std::size_t i = 0; i + 1 < depth; ++i) {
        if (cert.separations[i].k != i + 1) {
            throw input_error("certificate: separation records must be numbered consecutively");
        }
    }
    if (!cert.epsilon.is_normalized()) {
        throw input_error("certificate: epsilon sequence must be normalized");
    }
}

struct CoverRange {
    std::string kind;
    std::size_t k = 0;
    BigInt lo;
    BigInt hi;
    BigInt exponent; // the element exponent whose reciprocal bounds the range
};

} // namespace detail

// Replays the whole transcript against freshly recomputed quantities: base
// and scale constants, memberships, marker ordering, growth rows, separation
// constants, every stored check, the per-level domination ranges, and (when
// requested) brute-force cylinder gaps at small levels. Never throws on a
// failed replay; the report carries the first failing row.
inline VerifyReport verify_certificate(const SynthesisCertificate& cert,
                                       const VerifyOptions& options = {}) {
    detail::validate_certificate_shape(cert);
    const std::size_t depth = cert.depth();
    VerifyReport report;

    const AlgebraicReal beta = make_algebraic_real(cert.minpoly, cert.base_interval);
    {
        const GarsiaConstant gc = garsia_constant(beta);
        VerifyRow row;
        row.kind = "garsia";
        row.lhs = std::to_string(gc.M) + "," + std::to_string(gc.d) + "," +
                  format_rational(gc.landau) + "," + format_rational(gc.beta_low);
        row.rhs = std::to_string(cert.garsia.M) + "," + std::to_string(cert.garsia.d) + "," +
                  format_rational(cert.garsia.landau) + "," +
                  format_rational(cert.garsia.beta_low);
        row.pass = gc.M == cert.garsia.M && gc.d == cert.garsia.d &&
                   gc.landau == cert.garsia.landau && gc.beta_low == cert.garsia.beta_low;
        report.add(std::move(row));
    }

    const CFExponents s_cf(beta, cert.s_exponents);
    const CFExponents t_cf(beta, cert.t_exponents);
    const std::vector<ConvergentPair> sp = convergents(s_cf);
    const std::vector<ConvergentPair> tp = convergents(t_cf);

    // Convergent digit membership at the recorded markers.
    for (std::size_t k = 1; k <= depth; ++k) {
        const BigInt& n_marker = cert.levels[k - 1].N;
        const BigInt& m_marker = cert.levels[k - 1].M;
        VerifyRow srow;
        srow.kind = "membership-s";
        srow.k = k;
        srow.lhs = detail::level_from_pair(sp[k]).str();
        srow.rhs = n_marker.str();
        srow.pass = is_in_beta_base(sp[k].p, n_marker) && is_in_beta_base(sp[k].q, n_marker);
        report.add(std::move(srow));
        VerifyRow trow;
        trow.kind = "membership-t";
        trow.k = k;
        trow.lhs = detail::level_from_pair(tp[k]).str();
        trow.rhs = m_marker.str();
        trow.pass = is_in_beta_base(tp[k].p, m_marker) && is_in_beta_base(tp[k].q, m_marker);
        report.add(std::move(trow));
    }

    // Marker interleaving: M_k >= 2 N_k at each stage, N_{k+1} > M_k between
    // stages (which also forces the N chain strictly upward).
    for (std::size_t k = 1; k <= depth; ++k) {
        const LevelMarker& lv = cert.levels[k - 1];
        VerifyRow row;
        row.kind = "level-m";
        row.k = k;
        const BigInt doubled = lv.N * 2;
        row.lhs = doubled.str();
        row.rhs = lv.M.str();
        row.pass = doubled <= lv.M;
        report.add(std::move(row));
        if (k < depth) {
            const LevelMarker& next = cert.levels[k];
            VerifyRow order;
            order.kind = "level-n";
            order.k = k + 1;
            const BigInt above = lv.M + 1;
            order.lhs = above.str();
            order.rhs = next.N.str();
            order.pass = above <= next.N;
            report.add(std::move(order));
        }
    }

    // Growth criterion on both element lists.
    const std::pair<const CFExponents*, const char*> growth_sides[] = {{&s_cf, "growth-s"},
                                                                       {&t_cf, "growth-t"}};
    for (const auto& [cf, tag] : growth_sides) {
        for (const GrowthRow& gr : check_irrationality_growth(*cf, cert.garsia)) {
            VerifyRow row;
            row.kind = tag;
            row.k = gr.k;
            row.lhs = gr.dyadic_threshold.str();
            row.rhs = gr.exponent.str();
            row.pass = gr.pass;
            report.add(std::move(row));
        }
    }

    // Separation constants: rebuild each stage's constant at the recorded
    // exponent and demand the identical value, then keep the replayed result
    // for the dependent checks below.
    std::vector<SeparationResult> replayed;
    replayed.reserve(depth - 1);
    for (std::size_t k = 1; k < depth; ++k) {
        CFExponents prefix(beta, std::vector<BigInt>(cert.s_exponents.begin(),
                                                     cert.s_exponents.begin() +
                                                         static_cast<std::ptrdiff_t>(k)));
        const PolyClass cls{static_cast<unsigned>(k), BigInt(k)};
        const BetaRational multiplier(tp[k].p, tp[k].q);
        const SeparationResult sep =
            separation_at_exponent(prefix, cls, multiplier, cert.s_exponents[k]);
        const SeparationRecord& recorded = cert.separations[k - 1];
        VerifyRow row;
        row.kind = "separation-replay";
        row.k = k;
        row.lhs = detail::mag_string(sep.c) + ";L=" + sep.L.str() +
                  ";M1=" + detail::mag_string(sep.M1);
        row.rhs = detail::mag_string(recorded.c) + ";L=" + recorded.L.str() +
                  ";M1=" + detail::mag_string(recorded.M1);
        row.pass = detail::mag_identical(sep.c, recorded.c) && sep.L == recorded.L &&
                   detail::mag_identical(sep.M1, recorded.M1);
        report.add(std::move(row));
        replayed.push_back(sep);
    }

    // Stored checks: recompute both sides of each from scratch and demand
    // the recorded record match exactly (and hold as an inequality).
    {
        const std::size_t expected = 3 + 12 * (depth - 1);
        VerifyRow row;
        row.kind = "check-count";
        row.lhs = std::to_string(expected);
        row.rhs = std::to_string(cert.checks.size());
        row.pass = cert.checks.size() == expected;
        report.add(std::move(row));
    }
    for (const CheckRecord& rec : cert.checks) {
        std::optional<BigInt> lhs;
        std::optional<BigInt> rhs;
        BigInt eps_idx(0);
        const std::size_t k = rec.k;
        const bool stage_ok = k >= 1 && k <= depth;
        if (stage_ok && rec.kind == "membership-s") {
            lhs = detail::level_from_pair(sp[k]);
            rhs = cert.levels[k - 1].N;
        } else if (stage_ok && rec.kind == "membership-t") {
            lhs = detail::level_from_pair(tp[k]);
            rhs = cert.levels[k - 1].M;
        } else if (stage_ok && rec.kind == "level-m") {
            lhs = cert.levels[k - 1].N * 2;
            rhs = cert.levels[k - 1].M;
        } else if (stage_ok && k >= 2 && rec.kind == "level-n") {
            lhs = cert.levels[k - 2].M + 1;
            rhs = cert.levels[k - 1].N;
        } else if (stage_ok && k < depth) {
            const BigInt& e = cert.s_exponents[k];
            const BigInt& et = cert.t_exponents[k];
            if (rec.kind == "epsilon-s") {
                eps_idx = k == 1 ? cert.levels[0].N : cert.levels[k - 1].M;
                lhs = cert.epsilon.required_exponent(eps_idx);
                rhs = e;
            } else if (rec.kind == "separation-s") {
                lhs = replayed[k - 1].next_exponent;
                rhs = e;
            } else if (rec.kind == "growth-s") {
                lhs = detail::growth_requirement(k, sp[k], cert.garsia);
                rhs = e;
            } else if (rec.kind == "disjoint-s") {
                lhs = detail::disjointness_requirement(sp[k - 1]);
                rhs = e;
            } else if (rec.kind == "epsilon-t") {
                eps_idx = cert.levels[k].N;
                lhs = cert.epsilon.required_exponent(eps_idx);
                rhs = et;
            } else if (rec.kind == "gap-t") {
                lhs = detail::gap_requirement(replayed[k - 1].c, k);
                rhs = et;
            } else if (rec.kind == "growth-t") {
                lhs = detail::growth_requirement(k, tp[k], cert.garsia);
                rhs = et;
            } else if (rec.kind == "disjoint-t") {
                lhs = detail::disjointness_requirement(tp[k - 1]);
                rhs = et;
            }
        }
        VerifyRow row;
        row.kind = rec.kind;
        row.k = rec.k;
        row.n = rec.n;
        if (!lhs || !rhs) {
            row.kind = "unknown-check:" + rec.kind;
            row.lhs = rec.lhs.str();
            row.rhs = rec.rhs.str();
            row.pass = false;
        } else {
            row.lhs = lhs->str();
            row.rhs = rhs->str();
            row.pass = *lhs == rec.lhs && *rhs == rec.rhs && rec.n == eps_idx &&
                       rec.lhs <= rec.rhs;
        }
        report.add(std::move(row));
    }

    // Tail allowance chain: the t truncation after stage k sits within
    // c_k / k of its k-th convergent, certified through the element bound
    // |q_k' t - p_k'| <= 1/a_{k+1}' and the denominator growth.
    for (std::size_t k = 1; k < depth; ++k) {
        const Magnitude tail_gap =
            (bp_value_lower(tp[k].q) * bp_value_lower(tp[k + 1].q)).reciprocal();
        const Magnitude allowance =
            replayed[k - 1].c * Magnitude::from_rational(Rational(BigInt(1), BigInt(k)));
        VerifyRow row;
        row.kind = "tail-chain";
        row.k = k;
        row.lhs = detail::mag_string(tail_gap);
        row.rhs = detail::mag_string(allowance);
        row.pass = detail::mag_leq_certified(tail_gap, allowance);
        report.add(std::move(row));
    }

    // Level covering: [1, N_2] rides on the second t element (its witness
    // pair is in every digit set), later ranges alternate sides. Explicit
    // rows check each level against the element exponent until the row cap;
    // a single range row (the budget at the range's far end, which dominates
    // every earlier level of a nonincreasing sequence) covers the rest.
    std::vector<detail::CoverRange> ranges;
    ranges.push_back({"cover-initial", 1, BigInt(1), cert.levels[1].N, cert.t_exponents[1]});
    for (std::size_t k = 2; k < depth; ++k) {
        ranges.push_back({"cover-s", k, cert.levels[k - 1].N, cert.levels[k - 1].M,
                          cert.s_exponents[k]});
        ranges.push_back({"cover-t", k, cert.levels[k - 1].M, cert.levels[k].N,
                          cert.t_exponents[k]});
    }
    std::size_t explicit_budget = options.explicit_row_cap;
    for (const detail::CoverRange& range : ranges) {
        const BigInt count = range.hi - range.lo + 1;
        if (count <= BigInt(explicit_budget)) {
            for (BigInt n = range.lo; n <= range.hi; ++n) {
                const BigInt need = cert.epsilon.required_exponent(n);
                VerifyRow row;
                row.kind = range.kind;
                row.k = range.k;
                row.n = n;
                row.lhs = need.str();
                row.rhs = range.exponent.str();
                row.pass = need <= range.exponent;
                report.add(std::move(row));
            }
            explicit_budget -= static_cast<std::size_t>(count);
        } else {
            const BigInt need = cert.epsilon.required_exponent(range.hi);
            VerifyRow row;
            row.kind = range.kind + "-range";
            row.k = range.k;
            row.n = range.hi;
            row.lhs = need.str();
            row.rhs = range.exponent.str();
            row.pass = need <= range.exponent;
            report.add(std::move(row));
        }
    }

    // Brute-force cross-check: rebuild the deepest truncation pair whose
    // exponents the dense evaluator can afford, then measure the actual
    // level-n gap and compare against the budget.
    if (options.brute_n_max > 0) {
        if (options.brute_n_max > kCylinderLevelCap) {
            throw input_error("verify_certificate: brute_n_max exceeds the cylinder level cap");
        }
        const auto deepest = [&](const std::vector<BigInt>& exps) {
            std::size_t take = 0;
            while (take < exps.size() && exps[take] <= BigInt(kVerifyTruncationExponentCap)) {
                ++take;
            }
            return CFExponents(beta, std::vector<BigInt>(exps.begin(),
                                                         exps.begin() +
                                                             static_cast<std::ptrdiff_t>(take)));
        };
        const CFExponents s_trunc = deepest(cert.s_exponents);
        const CFExponents t_trunc = deepest(cert.t_exponents);
        const RationalInterval s_hull = tail_hull(s_trunc);
        const RationalInterval t_hull = tail_hull(t_trunc);
        const IFSParams params(beta, ParamValue::enclosed_tail(s_trunc),
                               ParamValue::enclosed_tail(t_trunc));
        for (unsigned n = 1; n <= options.brute_n_max; ++n) {
            const Rational eps_n = cert.epsilon.value_at(BigInt(n));
            const Rational target = eps_n / 4;
            VerifyRow row;
            row.kind = "brute-delta";
            row.n = BigInt(n);
            row.rhs = format_rational(eps_n);
            if (s_hull.width() > target || t_hull.width() > target) {
                row.lhs = "hull width above " + format_rational(target);
                row.pass = false;
            } else {
                const DeltaResult dr = delta_n(params, n);
                row.lhs = format_rational(dr.value.hi);
                row.pass = dr.value.hi <= eps_n;
            }
            report.add(std::move(row));
        }
    }

    return report;
}

// The level-k truncation parameters: both translations as tail hulls, exactly
// the sets the certificate constrains. Refining further means extending the
// certificate, not shrinking these intervals.
inline IFSParams extract_params(const SynthesisCertificate& cert, std::size_t k) {
    detail::validate_certificate_shape(cert);
    if (k < 1 || k > cert.depth()) {
        throw input_error("extract_params: truncation depth out of range");
    }
    const AlgebraicReal beta = make_algebraic_real(cert.minpoly, cert.base_interval);
    const auto truncate = [&](const std::vector<BigInt>& exps) {
        return CFExponents(beta, std::vector<BigInt>(exps.begin(),
                                                     exps.begin() +
                                                         static_cast<std::ptrdiff_t>(k)));
    };
    return IFSParams(beta, ParamValue::enclosed_tail(truncate(cert.s_exponents)),
                     ParamValue::enclosed_tail(truncate(cert.t_exponents)));
}

namespace detail {

// Certified upper bound on |f(beta)| / |g(beta)| for a value-nonzero g:
// shrink the base window until the g enclosure is sign-definite, then take
// the interval quotient's extreme.
inline Rational abs_ratio_upper(const AlgebraicReal& beta, const IntPolynomial& f,
                                const IntPolynomial& g) {
    const BetaPolynomial fb(beta, f);
    const BetaPolynomial gb(beta, g);
    Rational w(1, 256);
    for (int round = 0; round < 24; ++round) {
        const RationalInterval giv = bp_enclosure(gb, w);
        if (giv.lo > 0 || giv.hi < 0) {
            const RationalInterval fa = iv_abs(bp_enclosure(fb, w));
            const RationalInterval ga = iv_abs(giv);
            return fa.hi / ga.lo;
        }
        w /= 65536;
    }
    throw resource_error("refute_relation: could not certify the divisor away from zero");
}

} // namespace detail

// Plays a putative exact-overlap relation s = (f/g) t + h/g against the
// certificate: any recorded stage k whose class covers (f, g, h) and whose
// index exceeds a certified bound on |f(beta)/g(beta)| makes the relation's
// best approximation land strictly inside the protected separation gap.
// Bracket-only separation constants divide out of the comparison, so the
// reported pair is then the scaled (bound/k, 1) rather than (c*bound/k, c).
inline RefutationReport refute_relation(const SynthesisCertificate& cert,
                                        const IntPolynomial& f,
                                        const IntPolynomial& g,
                                        const IntPolynomial& h) {
    detail::validate_certificate_shape(cert);
    const AlgebraicReal beta = make_algebraic_real(cert.minpoly, cert.base_interval);
    if (is_value_zero(BetaPolynomial(beta, g))) {
        throw input_error("refute_relation: divisor polynomial vanishes at the base");
    }

    RefutationReport report;
    report.f = f;
    report.g = g;
    report.h = h;
    const Rational ratio_ub = detail::abs_ratio_upper(beta, f, g);
    for (const SeparationRecord& sep : cert.separations) {
        const PolyClass cls{static_cast<unsigned>(sep.k), BigInt(sep.k)};
        if (!cls.contains(f) || !cls.contains(g) || !cls.contains(h)) continue;
        const Rational stage_index(BigInt(sep.k));
        if (stage_index <= ratio_ub) continue;
        report.k_used = sep.k;
        if (sep.c.is_exact()) {
            const Rational c = sep.c.exact_value();
            report.lhs_bound = c * ratio_ub / stage_index;
            report.rhs_bound = c;
        } else {
            report.lhs_bound = ratio_ub / stage_index;
            report.rhs_bound = Rational(1);
        }
        if (report.lhs_bound < report.rhs_bound) {
            report.verdict = RefutationVerdict::contradiction;
        }
        break;
    }
    return report;
}

} // namespace betaifs
