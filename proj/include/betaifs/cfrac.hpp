#pragma once

// Generalized continued fractions whose elements are powers of the base:
// [a_1, a_2, ...] with a_i = base^{e_i}. Convergents are kept as unreduced
// polynomial pairs, so every quantity derived here (Diophantine bounds,
// growth checks, separation constants) is replayable bit for bit. The
// element exponents can be astronomically large; everything routes through
// sparse polynomials and Magnitude brackets rather than materialized values.

#include "betaifs/algebraic.hpp"
#include "betaifs/beta_poly.hpp"
#include "betaifs/garsia.hpp"
#include "betaifs/magnitude.hpp"
#include "betaifs/numeric.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace betaifs {

struct CFExponents {
    AlgebraicReal base;
    std::vector<BigInt> exps; // e_1, e_2, ...; element a_i = base^{e_i}

    CFExponents(AlgebraicReal b, std::vector<BigInt> e)
        : base(std::move(b)), exps(std::move(e)) {
        for (const BigInt& exp : exps) {
            if (exp < 0) throw input_error("CFExponents: negative exponent");
        }
    }
};

struct ConvergentPair {
    BetaPolynomial p;
    BetaPolynomial q;
    std::size_t k = 0;
};

// p_0 = 0, q_0 = 1, p_1 = 1, q_1 = a_1, then
// p_k = a_k p_{k-1} + p_{k-2} via an exponent shift plus an add.
inline std::vector<ConvergentPair> convergents(const CFExponents& cf) {
    if (cf.exps.empty()) throw input_error("convergents: empty exponent list");
    std::vector<ConvergentPair> out;
    out.reserve(cf.exps.size() + 1);
    out.push_back({BetaPolynomial::constant(cf.base, 0),
                   BetaPolynomial::constant(cf.base, 1), 0});
    out.push_back({BetaPolynomial::constant(cf.base, 1),
                   BetaPolynomial::power(cf.base, cf.exps[0]), 1});
    for (std::size_t k = 2; k <= cf.exps.size(); ++k) {
        const BigInt& e = cf.exps[k - 1];
        out.push_back({bp_add(bp_shift(out[k - 1].p, e), out[k - 2].p),
                       bp_add(bp_shift(out[k - 1].q, e), out[k - 2].q), k});
    }
    return out;
}

inline BetaRational convergent_value(const ConvergentPair& c) {
    return BetaRational(c.p, c.q);
}

namespace detail {

// Monotone slack exponent: every convergent gap 1/(q_{j-1} q_j) for j <= k
// stays above 2^-E, so enclosing endpoint values to width 2^-(E+6) keeps
// hulls nested as terms are appended.
inline BigInt hull_slack_exponent(const std::vector<ConvergentPair>& pairs,
                                  std::size_t k) {
    BigInt E = 0;
    for (std::size_t j = 1; j <= k; ++j) {
        const BigInt e = bp_value_upper(pairs[j - 1].q).log2_hi() +
                         bp_value_upper(pairs[j].q).log2_hi();
        if (e > E) E = e;
    }
    return E + 6;
}

inline RationalInterval value_enclosure(const ConvergentPair& c, const Rational& w) {
    return BetaRational(c.p, c.q).enclosure(w);
}

} // namespace detail

// Certified interval containing the last two convergents' values, hence every
// continuation of the prefix and the limit of any infinite extension.
inline RationalInterval limit_enclosure(const CFExponents& cf) {
    if (cf.exps.size() < 2) {
        throw input_error("limit_enclosure: need at least two elements");
    }
    const std::vector<ConvergentPair> pairs = convergents(cf);
    const std::size_t k = cf.exps.size();
    const Rational w = pow2_rational(-detail::hull_slack_exponent(pairs, k));
    return hull(detail::value_enclosure(pairs[k - 1], w),
                detail::value_enclosure(pairs[k], w));
}

// Hull of the continuation set itself: values of extensions of the full
// prefix lie between the last convergent and its mediant with the previous
// one (the mediant is the z = 1 endpoint of the tail parametrization).
inline RationalInterval tail_hull(const CFExponents& cf) {
    if (cf.exps.empty()) throw input_error("tail_hull: empty exponent list");
    const std::vector<ConvergentPair> pairs = convergents(cf);
    const std::size_t k = cf.exps.size();
    const Rational w = pow2_rational(-detail::hull_slack_exponent(pairs, k) - 2);
    const ConvergentPair mediant{bp_add(pairs[k].p, pairs[k - 1].p),
                                 bp_add(pairs[k].q, pairs[k - 1].q), k};
    return hull(detail::value_enclosure(pairs[k], w),
                detail::value_enclosure(mediant, w));
}

// Certified rationals l <= 1/(q_k (q_{k+1}+q_k)) and u >= 1/(q_k q_{k+1});
// every infinite continuation x of the first k elements (with the given
// element k+1) has l < |x - p_k/q_k| < u.
inline std::pair<Rational, Rational> diophantine_bounds(const CFExponents& cf,
                                                        std::size_t k) {
    if (k + 1 > cf.exps.size()) {
        throw input_error("diophantine_bounds: index needs element k+1");
    }
    const std::vector<ConvergentPair> pairs = convergents(cf);
    const Magnitude denom_l = bp_value_upper(pairs[k].q) *
                              bp_value_upper(bp_add(pairs[k + 1].q, pairs[k].q));
    const Magnitude denom_u = bp_value_lower(pairs[k].q) *
                              bp_value_lower(pairs[k + 1].q);
    if (!denom_l.is_exact() || !denom_u.is_exact()) {
        throw resource_error("diophantine_bounds: denominators too large to materialize");
    }
    return {Rational(1) / denom_l.exact_value(),
            Rational(1) / denom_u.exact_value()};
}

struct GrowthRow {
    std::size_t k = 0;       // row for the requirement on element k+1
    BigInt d;                // minimal joint class parameter of p_k, q_k
    BigInt exponent;         // e_{k+1} actually present
    BigInt dyadic_threshold; // k*d*clog2(M) + M*clog2(d)
    bool pass = false;
    bool exact_checked = false;
};

// Per-index growth report: a full pass certifies (via the growth criterion)
// that no infinite extension value is a ratio of base-polynomials. The
// dyadic threshold decides most rows without materializing anything; rows
// failing it fall back to the exact comparison when affordable.
inline std::vector<GrowthRow> check_irrationality_growth(const CFExponents& cf,
                                                         const GarsiaConstant& gc) {
    const std::vector<ConvergentPair> pairs = convergents(cf);
    std::vector<GrowthRow> rows;
    const BigInt cl2_M = ceil_log2(BigInt(gc.M));
    for (std::size_t k = 1; k + 1 <= cf.exps.size(); ++k) {
        GrowthRow row;
        row.k = k;
        BigInt d = 1;
        for (const BetaPolynomial* poly : {&pairs[k].p, &pairs[k].q}) {
            if (poly->degree() > d) d = poly->degree();
            if (poly->height() > d) d = poly->height();
        }
        row.d = d;
        row.exponent = cf.exps[k];
        row.dyadic_threshold = BigInt(k) * d * cl2_M + BigInt(gc.M) * ceil_log2(d);
        if (row.exponent >= row.dyadic_threshold) {
            row.pass = true;
        } else {
            const BigInt cost = BigInt(k) * d * BigInt(bit_length(BigInt(gc.M))) +
                                BigInt(gc.M) * BigInt(bit_length(d));
            if (cost <= BigInt(kExactBitBudget)) {
                const Rational target =
                    pow_rational(Rational(gc.M), BigInt(k) * d, kMaterializeBitCap) *
                    pow_rational(Rational(d), BigInt(gc.M), kMaterializeBitCap);
                const Magnitude power = beta_power_magnitude(cf.base, row.exponent);
                row.pass = power.is_exact() ? power.exact_value() >= target
                                            : cmp_pow2(target, power.log2_lo()) <= 0;
                row.exact_checked = true;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

struct SeparationResult {
    BigInt next_exponent; // minimal admissible exponent for element k+1
    Magnitude c;          // certified positive separation constant
    BigInt L;             // joint class parameter of the combination family
    Magnitude M1;         // recorded upper bound on |q_k * den| times the g-range
};

namespace detail {

// Height bound for a product in the fixed association order, via the
// convolution bound height(fg) <= (min(deg f, deg g)+1) * height(f) * height(g).
inline BigInt product_height(const BigInt& deg_a, const BigInt& height_a,
                             const BigInt& deg_b, const BigInt& height_b) {
    const BigInt m = deg_a < deg_b ? deg_a : deg_b;
    return (m + 1) * height_a * height_b;
}

struct SeparationCore {
    std::vector<ConvergentPair> pairs;
    BetaPolynomial num;
    BetaPolynomial den;
    BigInt L;
    Magnitude M1;
    Magnitude R;      // 2 * M^L * L^M * M1
    BigInt threshold; // minimal admissible next exponent
};

inline SeparationCore separation_core(const CFExponents& prefix, const PolyClass& cls,
                                      const std::optional<BetaRational>& multiplier) {
    if (prefix.exps.empty()) throw input_error("separation: empty prefix");
    if (cls.H <= 0) throw input_error("separation: degenerate class");

    SeparationCore core{convergents(prefix),
                        BetaPolynomial::constant(prefix.base, 1),
                        BetaPolynomial::constant(prefix.base, 1),
                        BigInt(0), Magnitude(), Magnitude(), BigInt(0)};
    if (multiplier) {
        if (!same_base(multiplier->numerator(), core.pairs.front().q)) {
            throw input_error("separation: multiplier base mismatch");
        }
        core.num = multiplier->numerator();
        core.den = multiplier->denominator();
    }
    const std::size_t k = prefix.exps.size();
    const BetaPolynomial& p = core.pairs[k].p;
    const BetaPolynomial& q = core.pairs[k].q;

    // Joint class parameter: for every f, g, h in P(n, H) the combination
    // p_k*(g*den) - q_k*(f*num) - q_k*(h*den) lies in P(L, L).
    const BigInt n(cls.n);
    const BigInt H = cls.H;
    BigInt deg_bound = 0;
    BigInt height_bound = 0;
    const auto accumulate = [&](const BetaPolynomial& conv, const BetaPolynomial& mult) {
        const BigInt inner_deg = n + mult.degree();
        const BigInt inner_height = product_height(n, H, mult.degree(), mult.height());
        const BigInt deg = conv.degree() + inner_deg;
        if (deg > deg_bound) deg_bound = deg;
        height_bound += product_height(conv.degree(), conv.height(),
                                       inner_deg, inner_height);
    };
    accumulate(p, core.den);
    accumulate(q, core.num);
    accumulate(q, core.den);
    core.L = deg_bound > height_bound ? deg_bound : height_bound;

    // Recorded upper bound on |q_k(beta) den(beta) g(beta)| over the class:
    // |g(beta)| <= H (n+1) max(1, beta_hi)^n with beta_hi from the base window.
    Rational beta_hi = base_window(prefix.base).hi;
    if (beta_hi < 1) beta_hi = 1;
    const BigInt n_plus_1 = n + 1;
    const Rational g_range = Rational(H) * Rational(n_plus_1) *
                             pow_rational(beta_hi, n, kMaterializeBitCap);
    const Magnitude raw = Magnitude::from_rational(g_range) *
                          bp_value_upper(bp_mul(q, core.den));
    // The recorded bound must be one definite number: the exact rational, or
    // the power of two at the bracket's upper end.
    core.M1 = raw.is_exact() ? raw : Magnitude::from_pow2(raw.log2_hi());

    const GarsiaConstant gc = garsia_constant(prefix.base);
    core.R = Magnitude::from_rational(Rational(2)) *
             Magnitude::from_rational(Rational(gc.M)).pow(core.L) *
             Magnitude::from_rational(Rational(core.L)).pow(BigInt(gc.M)) *
             core.M1;
    core.threshold = min_exponent_exceeding(core.R);
    return core;
}

} // namespace detail

// Separation constant for a fixed next element beta^exponent: every value s
// continuing [a_1..a_k, beta^exponent] keeps |s - (f/g)(num/den) - h/g| >= c
// for all f, g, h in the class with g(beta) != 0. The exponent must clear
// the admissibility threshold beta^e > 2 M^L L^M M1.
inline SeparationResult separation_at_exponent(const CFExponents& prefix,
                                               const PolyClass& cls,
                                               const std::optional<BetaRational>& multiplier,
                                               const BigInt& exponent) {
    detail::SeparationCore core = detail::separation_core(prefix, cls, multiplier);
    if (exponent < core.threshold) {
        throw input_error("separation: exponent below the admissibility threshold");
    }
    const std::size_t k = prefix.exps.size();
    CFExponents extended = prefix;
    extended.exps.push_back(exponent);
    const std::vector<ConvergentPair> ext = convergents(extended);
    const Magnitude denom = bp_value_upper(
        bp_mul(ext[k].q, bp_add(ext[k + 1].q, ext[k].q)));

    SeparationResult result;
    result.next_exponent = core.threshold;
    result.L = std::move(core.L);
    result.M1 = std::move(core.M1);
    result.c = mag_min(core.R.reciprocal(), denom.reciprocal());
    return result;
}

// Same guarantee with the minimal admissible exponent (the deterministic,
// reproducible choice).
inline SeparationResult separation_choose(const CFExponents& prefix, const PolyClass& cls,
                                          const std::optional<BetaRational>& multiplier =
                                              std::nullopt) {
    const detail::SeparationCore core = detail::separation_core(prefix, cls, multiplier);
    return separation_at_exponent(prefix, cls, multiplier, core.threshold);
}

} // namespace betaifs
