#pragma once

// The four-map system {x/b, (x+1)/b, (x+s)/b, (x+t)/b} on [0, 1] for a base
// b >= 2. Level-n cylinder endpoints are the points sum_i d_i b^{-i} with
// digits d_i in {0, 1, s, t}, so everything here reduces to arithmetic on
// digit polynomials: enumerating the 0/1 power-sum set, evaluating cylinder
// points, certifying the minimal gap at a level, detecting exact collisions,
// and extracting the linear relation a collision imposes on (s, t).
//
// Parameters may be exact ratios of base polynomials or limits of
// power-element continued fractions; operations that need exact equality
// (overlap detection, relation extraction) insist on the former, while the
// metric operations accept both and return certified intervals.

#include "betaifs/algebraic.hpp"
#include "betaifs/beta_poly.hpp"
#include "betaifs/cfrac.hpp"
#include "betaifs/interval.hpp"
#include "betaifs/magnitude.hpp"
#include "betaifs/numeric.hpp"
#include "betaifs/poly.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace betaifs {

// Enumeration guards: the 0/1 power-sum set has 2^n elements, a cylinder
// level has 4^n words, and the all-pairs scan squares the latter.
inline constexpr unsigned kBaseSetLevelCap = 24;
inline constexpr unsigned kCylinderLevelCap = 12;
inline constexpr unsigned kAllPairsLevelCap = 6;
inline constexpr unsigned kOverlapLevelCap = 10;

// A map word: letters in 1..4 selecting, in order of application from the
// outside in, the digit classes {0, 1, s, t}.
struct Word {
    std::vector<int> letters;

    explicit Word(std::vector<int> ls) : letters(std::move(ls)) {
        if (letters.empty()) throw input_error("Word: empty letter sequence");
        for (int l : letters) {
            if (l < 1 || l > 4) throw input_error("Word: letter out of range");
        }
    }

    std::size_t length() const { return letters.size(); }

    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word&, const Word&) = default;
};

// A translation parameter: either an exact ratio of base polynomials or the
// limit of a power-element continued fraction, known only through enclosures.
class ParamValue {
public:
    static ParamValue exact(BetaRational value) {
        ParamValue p;
        p.exact_ = std::move(value);
        return p;
    }

    static ParamValue enclosed(CFExponents cf) {
        if (cf.exps.size() < 2) {
            throw input_error("ParamValue: enclosed form needs at least two elements");
        }
        ParamValue p;
        p.hull_ = limit_enclosure(cf);
        p.cf_ = std::move(cf);
        return p;
    }

    // Same enclosed form, but the interval is the hull of the whole tail set
    // of the truncation: every extension of the element list stays between
    // the last convergent and its mediant with the previous one.
    static ParamValue enclosed_tail(CFExponents cf) {
        if (cf.exps.empty()) {
            throw input_error("ParamValue: tail form needs at least one element");
        }
        ParamValue p;
        p.hull_ = tail_hull(cf);
        p.cf_ = std::move(cf);
        return p;
    }

    bool is_exact() const { return exact_.has_value(); }

    const BetaRational& exact_ratio() const {
        if (!exact_) throw input_error("ParamValue: not an exact parameter");
        return *exact_;
    }

    const CFExponents& enclosure_source() const {
        if (!cf_) throw input_error("ParamValue: not an enclosed parameter");
        return *cf_;
    }

    const AlgebraicReal& base() const {
        return exact_ ? exact_->base() : cf_->base;
    }

    // Exact parameters honor any positive target width. An enclosed parameter
    // bottoms out at the hull of its last two convergents, so the returned
    // interval may be wider than requested; callers must treat the width as
    // best effort.
    RationalInterval enclosure(const Rational& width) const {
        if (exact_) return exact_->enclosure(width);
        return *hull_;
    }

private:
    ParamValue() = default;

    std::optional<BetaRational> exact_;
    std::optional<CFExponents> cf_;
    std::optional<RationalInterval> hull_;
};

struct IFSParams {
    AlgebraicReal base;
    ParamValue s;
    ParamValue t;

    IFSParams(AlgebraicReal b, ParamValue s_in, ParamValue t_in)
        : base(std::move(b)), s(std::move(s_in)), t(std::move(t_in)) {
        if (base.cmp(Rational(2)) < 0) {
            throw input_error("IFSParams: base must be at least 2");
        }
        if (s.base().id() != base.id() || t.base().id() != base.id()) {
            throw input_error("IFSParams: parameter base mismatch");
        }
    }
};

// The 0/1 power-sum set at level n: all sums of distinct powers b^0..b^{n-1},
// indexed so that bit j of the element index selects the b^j term.
struct BetaBaseSet {
    unsigned n = 0;
    std::vector<BetaPolynomial> elements;
};

struct CylinderPoint {
    Word word;
    RationalInterval value;
    bool exact = false; // point interval from exact rational arithmetic
};

struct DeltaResult {
    RationalInterval value; // certified enclosure of the minimal gap
    Word witness_a;
    Word witness_b;
    bool exact = false; // gap identified exactly (interval may still be fat)
};

struct LemmaBound {
    Rational bound;   // certified upper bound on min |q*param - p| over the set
    BetaPolynomial p; // witness pair attaining the bound
    BetaPolynomial q;
    Rational scaled;  // bound carried down to level n: bound * sup(b^{-n})
};

struct CollisionRecord {
    Word a;
    Word b;
    unsigned level = 0;
};

// A collision phi_a(0) = phi_b(0) rearranged as A*s + B*t = C; when A is
// value-nonzero this solves to s = (f*t + h) / g.
struct SolvedOverlap {
    BetaPolynomial f;
    BetaPolynomial g;
    BetaPolynomial h;
};

struct OverlapRelation {
    BetaPolynomial A;
    BetaPolynomial B;
    BetaPolynomial C;
    std::optional<SolvedOverlap> solved;
};

namespace detail {

// Words at a level enumerate lexicographically as base-4 indices, most
// significant letter first.
inline Word word_from_index(std::size_t idx, unsigned n) {
    std::vector<int> letters(n);
    for (unsigned i = n; i-- > 0;) {
        letters[i] = static_cast<int>(idx & 3) + 1;
        idx >>= 2;
    }
    return Word(std::move(letters));
}

// phi_word(0) = b^{-n} * sum_i digit(letter_i) * b^{n-i}, so the letter at
// (1-based) position i contributes its digit at exponent n - i. These are the
// 0/1 indicator polynomials of the three nonzero digit classes.
struct LetterClassPolys {
    BetaPolynomial ones;  // positions carrying digit 1
    BetaPolynomial s_cls; // positions carrying digit s
    BetaPolynomial t_cls; // positions carrying digit t
};

inline LetterClassPolys letter_class_polys(const AlgebraicReal& base, const Word& w) {
    const std::size_t n = w.length();
    std::array<std::map<BigInt, BigInt>, 3> terms;
    for (std::size_t i = 0; i < n; ++i) {
        const int letter = w.letters[i];
        if (letter == 1) continue;
        terms[static_cast<std::size_t>(letter - 2)].emplace(BigInt(n - 1 - i), BigInt(1));
    }
    return {BetaPolynomial(base, std::move(terms[0])),
            BetaPolynomial(base, std::move(terms[1])),
            BetaPolynomial(base, std::move(terms[2]))};
}

// Numerators of all level-n cylinder points over the common denominator
// sden*tden*b^n, in lexicographic word order. Built by depth-first prefix
// sums: the digit numerators over sden*tden are 0, sden*tden, snum*tden,
// tnum*sden, and the letter at depth d contributes at exponent n - 1 - d.
inline std::vector<BetaPolynomial> cylinder_numerators(const IFSParams& params, unsigned n) {
    const BetaRational& s = params.s.exact_ratio();
    const BetaRational& t = params.t.exact_ratio();
    const BetaPolynomial den_st = bp_mul(s.denominator(), t.denominator());
    const std::array<BetaPolynomial, 4> digit_nums = {
        BetaPolynomial::constant(params.base, 0),
        den_st,
        bp_mul(s.numerator(), t.denominator()),
        bp_mul(t.numerator(), s.denominator()),
    };

    std::vector<BetaPolynomial> out;
    out.reserve(std::size_t{1} << (2 * n));
    const auto rec = [&](auto&& self, const BetaPolynomial& acc, unsigned depth) -> void {
        if (depth == n) {
            out.push_back(acc);
            return;
        }
        const BigInt shift(n - 1 - depth);
        for (int letter = 1; letter <= 4; ++letter) {
            if (letter == 1) {
                self(self, acc, depth + 1);
            } else {
                self(self, bp_add(acc, bp_shift(digit_nums[static_cast<std::size_t>(letter - 1)], shift)),
                     depth + 1);
            }
        }
    };
    rec(rec, digit_nums[0], 0);
    return out;
}

// Endpoints inherited from deep truncation hulls can carry denominators with
// tens of thousands of bits, and every tree-node addition below would then
// grind through bignum gcds. Past the size gate, endpoints are snapped
// outward onto a dyadic grid a few orders finer than the working width: the
// enclosure only grows, so soundness is untouched, while the follow-on
// arithmetic stays small.
inline RationalInterval compact_endpoints(const RationalInterval& iv, const Rational& width) {
    constexpr std::size_t kEndpointBitGate = 2048;
    const std::size_t worst =
        std::max({bit_length(numerator(iv.lo)), bit_length(denominator(iv.lo)),
                  bit_length(numerator(iv.hi)), bit_length(denominator(iv.hi))});
    if (worst <= kEndpointBitGate) return iv;
    BigInt g = 8 - floor_log2(width); // grid 2^-g, outward slack < 2^-(g-1)
    if (g < 64) g = 64;
    if (g > 65536) g = 65536; // keep the grid materializable; still outward
    const Rational scale = pow2_rational(g);
    const Rational lo_scaled = iv.lo * scale;
    const Rational hi_scaled = iv.hi * scale;
    const Rational lo = Rational(floor_rational(lo_scaled)) / scale;
    const Rational hi = Rational(ceil_rational(hi_scaled)) / scale;
    return {lo, hi};
}

// Interval values of all level-n cylinder points in lexicographic word order:
// phi_word(0) = sum_i digit(letter_i) * b^{-i}. The per-letter, per-depth
// contribution table is built once so the enumeration itself is one interval
// addition per tree node.
inline std::vector<RationalInterval> cylinder_intervals(const IFSParams& params, unsigned n,
                                                        const Rational& digit_width,
                                                        const Rational& base_width) {
    const RationalInterval win = params.base.refine_enclosure(base_width);
    const RationalInterval binv = RationalInterval::point(1) / win;
    const RationalInterval s_iv = compact_endpoints(params.s.enclosure(digit_width), digit_width);
    const RationalInterval t_iv = compact_endpoints(params.t.enclosure(digit_width), digit_width);

    // contrib[letter - 1][depth] = digit(letter) * b^{-(depth + 1)}
    std::array<std::vector<RationalInterval>, 4> contrib;
    for (auto& column : contrib) column.reserve(n);
    RationalInterval pow = binv;
    for (unsigned depth = 0; depth < n; ++depth) {
        contrib[0].push_back(RationalInterval::point(0));
        contrib[1].push_back(pow);
        contrib[2].push_back(s_iv * pow);
        contrib[3].push_back(t_iv * pow);
        if (depth + 1 < n) pow = pow * binv;
    }

    std::vector<RationalInterval> out;
    out.reserve(std::size_t{1} << (2 * n));
    const auto rec = [&](auto&& self, const RationalInterval& acc, unsigned depth) -> void {
        if (depth == n) {
            out.push_back(acc);
            return;
        }
        for (int letter = 1; letter <= 4; ++letter) {
            self(self, acc + contrib[static_cast<std::size_t>(letter - 1)][depth], depth + 1);
        }
    };
    rec(rec, RationalInterval::point(0), 0);
    return out;
}

inline Rational iv_midpoint(const RationalInterval& iv) {
    Rational mid = iv.lo + iv.hi;
    mid /= 2;
    return mid;
}

} // namespace detail

inline BetaBaseSet beta_base_set(const AlgebraicReal& beta, unsigned n,
                                 unsigned cap = kBaseSetLevelCap) {
    if (n == 0) throw input_error("beta_base_set: level must be positive");
    if (n > cap) {
        throw resource_error("beta_base_set: level " + std::to_string(n) +
                             " exceeds cap " + std::to_string(cap));
    }
    if (beta.cmp(Rational(2)) < 0) throw input_error("beta_base_set: base must be at least 2");

    BetaBaseSet out;
    out.n = n;
    const std::size_t count = std::size_t{1} << n;
    out.elements.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
        std::map<BigInt, BigInt> terms;
        for (unsigned j = 0; j < n; ++j) {
            if (mask >> j & 1) terms.emplace(BigInt(j), BigInt(1));
        }
        out.elements.push_back(BetaPolynomial(beta, std::move(terms)));
    }

    // Distinct 0/1 representations can only collide in value if the base
    // satisfies a 0/1 relation, which b >= 2 rules out; the scan keeps the
    // construction honest rather than trusting that argument.
    std::set<std::vector<Rational>> keys;
    for (const BetaPolynomial& p : out.elements) keys.insert(value_key(p));
    if (keys.size() != count) {
        throw input_error("beta_base_set: digit polynomials collide in value");
    }
    return out;
}

inline bool is_in_beta_base(const BetaPolynomial& p, const BigInt& n) {
    if (n <= 0) throw input_error("is_in_beta_base: level must be positive");
    return p.coeffs_in_01() && p.degree() < n;
}

inline bool is_in_beta_base(const BetaPolynomial& p, unsigned n) {
    return is_in_beta_base(p, BigInt(n));
}

inline std::vector<CylinderPoint> cylinder_points(const IFSParams& params, unsigned n,
                                                  const Rational& width,
                                                  unsigned cap = kCylinderLevelCap) {
    if (n == 0) throw input_error("cylinder_points: level must be positive");
    if (n > cap) {
        throw resource_error("cylinder_points: level " + std::to_string(n) +
                             " exceeds cap " + std::to_string(cap));
    }
    if (width <= 0) throw input_error("cylinder_points: width must be positive");

    const std::size_t count = std::size_t{1} << (2 * n);
    std::vector<CylinderPoint> out;
    out.reserve(count);

    if (params.s.is_exact() && params.t.is_exact()) {
        const std::vector<BetaPolynomial> nums = detail::cylinder_numerators(params, n);
        const BetaPolynomial den_st = bp_mul(params.s.exact_ratio().denominator(),
                                             params.t.exact_ratio().denominator());
        const BetaPolynomial den = bp_mul(den_st, BetaPolynomial::power(params.base, BigInt(n)));
        if (const std::optional<Rational> b = params.base.exact_value()) {
            const Rational den_value = den.to_dense().eval(*b);
            for (std::size_t i = 0; i < count; ++i) {
                Rational v = nums[i].to_dense().eval(*b);
                v /= den_value;
                out.push_back({detail::word_from_index(i, n), RationalInterval::point(v), true});
            }
        } else {
            for (std::size_t i = 0; i < count; ++i) {
                const RationalInterval v = BetaRational(nums[i], den).enclosure(width);
                out.push_back({detail::word_from_index(i, n), v, false});
            }
        }
        return out;
    }

    // Enclosed parameters: refine until every value meets the target width or
    // the parameter hulls become the binding constraint.
    Rational target = width;
    target /= 4;
    std::vector<RationalInterval> values;
    std::optional<Rational> prev_worst;
    for (int round = 0; round < 10; ++round) {
        values = detail::cylinder_intervals(params, n, target, target);
        Rational worst(0);
        for (const RationalInterval& iv : values) {
            const Rational w = iv.width();
            if (w > worst) worst = w;
        }
        if (worst <= width) break;
        if (prev_worst && worst >= *prev_worst) break; // parameter hull floor
        prev_worst = worst;
        target /= 256;
    }
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back({detail::word_from_index(i, n), values[i], false});
    }
    return out;
}

namespace detail {

// Exact minimal gap between cylinder points with a rational base: values are
// plain rationals, so sort and scan adjacent differences.
inline DeltaResult delta_exact_rational(const IFSParams& params, unsigned n, const Rational& b) {
    const std::vector<BetaPolynomial> nums = cylinder_numerators(params, n);
    const BetaPolynomial den_st = bp_mul(params.s.exact_ratio().denominator(),
                                         params.t.exact_ratio().denominator());
    const Rational den_value = den_st.to_dense().eval(b) * pow_rational(b, BigInt(n), 1u << 20);

    const std::size_t count = nums.size();
    std::vector<Rational> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rational v = nums[i].to_dense().eval(b);
        v /= den_value;
        values[i] = std::move(v);
    }
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (values[i] != values[j]) return values[i] < values[j];
        return i < j;
    });

    std::optional<Rational> best;
    std::size_t best_at = 0;
    for (std::size_t k = 0; k + 1 < count; ++k) {
        Rational d = values[order[k + 1]] - values[order[k]];
        if (!best || d < *best) {
            best = std::move(d);
            best_at = k;
        }
    }
    const std::size_t ia = std::min(order[best_at], order[best_at + 1]);
    const std::size_t ib = std::max(order[best_at], order[best_at + 1]);
    return {RationalInterval::point(*best), word_from_index(ia, n), word_from_index(ib, n), true};
}

// Exact minimal gap with an algebraic base: order the common-denominator
// numerators (interval pre-sort, exact sign on overlap), then the minimum is
// an adjacent difference, picked by an exact sign tournament.
inline DeltaResult delta_exact_algebraic(const IFSParams& params, unsigned n) {
    const std::vector<BetaPolynomial> nums = cylinder_numerators(params, n);
    const BetaPolynomial den_st = bp_mul(params.s.exact_ratio().denominator(),
                                         params.t.exact_ratio().denominator());
    const BetaPolynomial den = bp_mul(den_st, BetaPolynomial::power(params.base, BigInt(n)));

    const std::size_t count = nums.size();
    const Rational presort_width = pow2_rational(BigInt(-48));
    std::vector<RationalInterval> ivs(count, RationalInterval::point(0));
    for (std::size_t i = 0; i < count; ++i) ivs[i] = bp_enclosure(nums[i], presort_width);

    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (ivs[i].hi < ivs[j].lo) return true;
        if (ivs[j].hi < ivs[i].lo) return false;
        const int c = sign_of(bp_sub(nums[j], nums[i]));
        if (c != 0) return c > 0;
        return i < j;
    });

    // Adjacent differences are nonnegative by construction of the order; a
    // value-zero difference is an exact collision and settles the gap at 0.
    std::optional<BetaPolynomial> best;
    std::size_t best_at = 0;
    for (std::size_t k = 0; k + 1 < count; ++k) {
        BetaPolynomial d = bp_sub(nums[order[k + 1]], nums[order[k]]);
        if (is_value_zero(d)) {
            const std::size_t ia = std::min(order[k], order[k + 1]);
            const std::size_t ib = std::max(order[k], order[k + 1]);
            return {RationalInterval::point(0), word_from_index(ia, n), word_from_index(ib, n),
                    true};
        }
        if (!best || sign_of(bp_sub(d, *best)) < 0) {
            best = std::move(d);
            best_at = k;
        }
    }
    const std::size_t ia = std::min(order[best_at], order[best_at + 1]);
    const std::size_t ib = std::max(order[best_at], order[best_at + 1]);
    const RationalInterval value =
        BetaRational(*best, den).enclosure(pow2_rational(BigInt(-64)));
    return {value, word_from_index(ia, n), word_from_index(ib, n), true};
}

// Minimal gap from interval values only. Sorting by midpoints and scanning
// adjacent pairs can miss the true minimal pair when enclosures overlap, but
// if every enclosure has width at most w and the true gap is D, some adjacent
// pair in midpoint order has certified lower bound at most (D + 3w)/2, so
// widening the reported lower bound by 2w keeps the enclosure sound:
// (D + 3w)/2 - 2w < D. The upper bound needs no correction because every
// candidate's true distance is at least D.
inline DeltaResult delta_enclosed(const IFSParams& params, unsigned n) {
    const std::size_t count = std::size_t{1} << (2 * n);
    Rational target = pow2_rational(BigInt(-20));
    std::optional<Rational> prev_worst;

    RationalInterval value{Rational(0), Rational(0)};
    std::size_t wa = 0;
    std::size_t wb = 1;
    for (int round = 0; round < 12; ++round) {
        const std::vector<RationalInterval> ivs =
            detail::cylinder_intervals(params, n, target, target);
        Rational worst(0);
        for (const RationalInterval& iv : ivs) {
            const Rational w = iv.width();
            if (w > worst) worst = w;
        }

        std::vector<std::size_t> order(count);
        for (std::size_t i = 0; i < count; ++i) order[i] = i;
        std::vector<Rational> mids(count);
        for (std::size_t i = 0; i < count; ++i) mids[i] = iv_midpoint(ivs[i]);
        std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            if (mids[i] != mids[j]) return mids[i] < mids[j];
            return i < j;
        });

        std::optional<Rational> gap_lo;
        std::optional<Rational> gap_hi;
        for (std::size_t k = 0; k + 1 < count; ++k) {
            const Rational dlo = dist_lower(ivs[order[k]], ivs[order[k + 1]]);
            const Rational dhi = dist_upper(ivs[order[k]], ivs[order[k + 1]]);
            if (!gap_lo || dlo < *gap_lo) gap_lo = dlo;
            if (!gap_hi || dhi < *gap_hi) {
                gap_hi = dhi;
                wa = std::min(order[k], order[k + 1]);
                wb = std::max(order[k], order[k + 1]);
            }
        }

        Rational slack = worst;
        slack *= 2;
        Rational lo = *gap_lo - slack;
        if (lo < 0) lo = 0;
        value = RationalInterval{lo, *gap_hi};

        if (lo > 0) {
            const Rational spread = (*gap_hi - lo) * 256;
            if (spread <= *gap_hi) break;
        }
        if (prev_worst && worst >= *prev_worst) break; // parameter hull floor
        prev_worst = worst;
        target /= 256;
    }
    return {value, word_from_index(wa, n), word_from_index(wb, n), false};
}

} // namespace detail

inline DeltaResult delta_n(const IFSParams& params, unsigned n,
                           unsigned cap = kCylinderLevelCap) {
    if (n == 0) throw input_error("delta_n: level must be positive");
    if (n > cap) {
        throw resource_error("delta_n: level " + std::to_string(n) + " exceeds cap " +
                             std::to_string(cap));
    }
    if (params.s.is_exact() && params.t.is_exact()) {
        if (const std::optional<Rational> b = params.base.exact_value()) {
            return detail::delta_exact_rational(params, n, *b);
        }
        return detail::delta_exact_algebraic(params, n);
    }
    return detail::delta_enclosed(params, n);
}

// Brute-force oracle: every pair is inspected, so no sort-order argument is
// involved. Fixed-point brackets at scale 2^80 keep the quadratic scan cheap;
// exact parameters get an exact sign tournament over the surviving pairs.
inline DeltaResult delta_n_allpairs(const IFSParams& params, unsigned n) {
    if (n == 0) throw input_error("delta_n_allpairs: level must be positive");
    if (n > kAllPairsLevelCap) {
        throw input_error("delta_n_allpairs: level " + std::to_string(n) +
                          " exceeds brute-force cap " + std::to_string(kAllPairsLevelCap));
    }

    const std::size_t count = std::size_t{1} << (2 * n);
    const bool exact_params = params.s.is_exact() && params.t.is_exact();
    const unsigned kScaleBits = 80;
    const BigInt scale = BigInt(1) << kScaleBits;

    // Common-denominator numerators drive the exact tournament; values (or
    // their enclosures) drive the fixed-point prune.
    std::vector<BetaPolynomial> nums;
    std::optional<Rational> rational_base;
    std::vector<Rational> exact_values;
    std::vector<RationalInterval> ivs;
    if (exact_params) {
        nums = detail::cylinder_numerators(params, n);
        rational_base = params.base.exact_value();
        if (rational_base) {
            const BetaPolynomial den_st = bp_mul(params.s.exact_ratio().denominator(),
                                                 params.t.exact_ratio().denominator());
            const Rational den_value = den_st.to_dense().eval(*rational_base) *
                                       pow_rational(*rational_base, BigInt(n), 1u << 20);
            exact_values.resize(count);
            for (std::size_t i = 0; i < count; ++i) {
                Rational v = nums[i].to_dense().eval(*rational_base);
                v /= den_value;
                exact_values[i] = std::move(v);
            }
        } else {
            const Rational w = pow2_rational(BigInt(-48));
            ivs.reserve(count);
            for (std::size_t i = 0; i < count; ++i) ivs.push_back(bp_enclosure(nums[i], w));
        }
    } else {
        const Rational w = pow2_rational(BigInt(-40));
        ivs = detail::cylinder_intervals(params, n, w, w);
    }

    std::vector<BigInt> lo_fp(count);
    std::vector<BigInt> hi_fp(count);
    for (std::size_t i = 0; i < count; ++i) {
        const Rational lo = rational_base ? exact_values[i] : ivs[i].lo;
        const Rational hi = rational_base ? exact_values[i] : ivs[i].hi;
        lo_fp[i] = floor_rational(lo * scale);
        hi_fp[i] = ceil_rational(hi * scale);
    }

    // Pass 1: fixed-point scan. dlo/dhi bracket the true distance of each
    // pair up to the bracket rounding, which only widens outward.
    std::optional<BigInt> best_hi_fp;
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    std::size_t wa = 0;
    std::size_t wb = 1;
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            BigInt dlo = lo_fp[j] - hi_fp[i];
            const BigInt other = lo_fp[i] - hi_fp[j];
            if (other > dlo) dlo = other;
            if (dlo < 0) dlo = 0;
            if (best_hi_fp && dlo > *best_hi_fp) continue;
            BigInt dhi = hi_fp[j] - lo_fp[i];
            const BigInt flip = hi_fp[i] - lo_fp[j];
            if (flip > dhi) dhi = flip;
            if (!best_hi_fp || dhi < *best_hi_fp) {
                best_hi_fp = dhi;
                wa = i;
                wb = j;
            }
            candidates.emplace_back(i, j);
        }
    }

    if (!exact_params) {
        // Re-derive the certified rational bounds over the surviving pairs
        // (pruned pairs were certified above the running minimum upper bound).
        std::optional<Rational> gap_lo;
        std::optional<Rational> gap_hi;
        for (const auto& [i, j] : candidates) {
            const Rational dlo = dist_lower(ivs[i], ivs[j]);
            const Rational dhi = dist_upper(ivs[i], ivs[j]);
            if (!gap_lo || dlo < *gap_lo) gap_lo = dlo;
            if (!gap_hi || dhi < *gap_hi) gap_hi = dhi;
        }
        return {RationalInterval{*gap_lo, *gap_hi}, detail::word_from_index(wa, n),
                detail::word_from_index(wb, n), false};
    }

    // Pass 2: exact tournament over the candidates. Zero differences win
    // outright; otherwise keep the first pair attaining the minimum.
    if (rational_base) {
        std::optional<Rational> best;
        for (const auto& [i, j] : candidates) {
            Rational d = exact_values[j] - exact_values[i];
            if (d < 0) d = -d;
            if (!best || d < *best) {
                best = std::move(d);
                wa = i;
                wb = j;
            }
        }
        return {RationalInterval::point(*best), detail::word_from_index(wa, n),
                detail::word_from_index(wb, n), true};
    }

    const BetaPolynomial den = bp_mul(bp_mul(params.s.exact_ratio().denominator(),
                                             params.t.exact_ratio().denominator()),
                                      BetaPolynomial::power(params.base, BigInt(n)));
    std::optional<BetaPolynomial> best;
    for (const auto& [i, j] : candidates) {
        BetaPolynomial d = bp_sub(nums[j], nums[i]);
        const int sd = sign_of(d);
        if (sd == 0) {
            return {RationalInterval::point(0), detail::word_from_index(i, n),
                    detail::word_from_index(j, n), true};
        }
        if (sd < 0) d = bp_neg(d);
        if (!best || sign_of(bp_sub(d, *best)) < 0) {
            best = std::move(d);
            wa = i;
            wb = j;
        }
    }
    const RationalInterval value =
        BetaRational(*best, den).enclosure(pow2_rational(BigInt(-64)));
    return {value, detail::word_from_index(wa, n), detail::word_from_index(wb, n), true};
}

// Minimum of |q*param - p| over the level-n 0/1 power-sum set, excluding the
// trivial pair (0, 0): an upper bound on how well the parameter is
// approximated by ratios from the digit set, which caps the level-n gap after
// scaling by sup(b^{-n}).
inline LemmaBound lemma_upper_bound(const AlgebraicReal& beta, const ParamValue& param,
                                    unsigned n, unsigned cap = kCylinderLevelCap) {
    if (n == 0) throw input_error("lemma_upper_bound: level must be positive");
    if (n > cap) {
        throw resource_error("lemma_upper_bound: level " + std::to_string(n) +
                             " exceeds cap " + std::to_string(cap));
    }
    if (param.base().id() != beta.id()) {
        throw input_error("lemma_upper_bound: parameter base mismatch");
    }

    const BetaBaseSet bs = beta_base_set(beta, n);
    const std::size_t count = bs.elements.size();
    const Rational w = pow2_rational(BigInt(-48));
    const RationalInterval piv = param.enclosure(w);
    std::vector<RationalInterval> elem_ivs;
    elem_ivs.reserve(count);
    for (const BetaPolynomial& e : bs.elements) elem_ivs.push_back(bp_enclosure(e, w));

    std::optional<Rational> best;
    std::size_t best_q = 0;
    std::size_t best_p = 1;
    for (std::size_t qi = 0; qi < count; ++qi) {
        const RationalInterval prod = elem_ivs[qi] * piv;
        for (std::size_t pi = 0; pi < count; ++pi) {
            if (qi == 0 && pi == 0) continue;
            const RationalInterval d = iv_abs(prod - elem_ivs[pi]);
            if (!best || d.hi < *best) {
                best = d.hi;
                best_q = qi;
                best_p = pi;
            }
        }
    }

    const RationalInterval win = base_window(beta);
    const Rational down = pow_rational(win.lo, BigInt(n), 1u << 20);
    Rational scaled = *best;
    scaled /= down;
    return {*best, bs.elements[best_p], bs.elements[best_q], scaled};
}

// Certified upper bound b^{-(n + e_{k+1})} on the level-n gap produced by the
// k-th convergent of an enclosed parameter, valid when both convergent parts
// lie in the level-n digit set.
inline Rational convergent_witness_bound(const AlgebraicReal& beta, const CFExponents& cf,
                                         std::size_t k, unsigned n) {
    if (n == 0) throw input_error("convergent_witness_bound: level must be positive");
    if (cf.base.id() != beta.id()) {
        throw input_error("convergent_witness_bound: base mismatch");
    }
    if (k >= cf.exps.size()) {
        // the bound consumes element k+1, whose exponent is exps[k]
        throw input_error("convergent_witness_bound: continued fraction too short");
    }
    const std::vector<ConvergentPair> pairs = convergents(cf);
    if (!is_in_beta_base(pairs[k].p, n) || !is_in_beta_base(pairs[k].q, n)) {
        throw input_error("convergent_witness_bound: convergent outside the level digit set");
    }
    const BigInt e = cf.exps[k] + BigInt(n);
    const Magnitude m = beta_power_magnitude(beta, e).reciprocal();
    if (m.is_exact()) return m.exact_value();
    return pow2_rational(m.log2_hi());
}

// All exact cylinder-point collisions up to a level. Requires exact
// parameters: collisions are equalities of algebraic numbers, which interval
// data can never confirm.
inline std::vector<CollisionRecord> find_exact_overlaps(const IFSParams& params, unsigned max_n,
                                                        unsigned cap = kOverlapLevelCap) {
    if (!params.s.is_exact() || !params.t.is_exact()) {
        throw input_error("find_exact_overlaps: overlap detection requires exact parameters");
    }
    if (max_n == 0) throw input_error("find_exact_overlaps: level must be positive");
    if (max_n > cap) {
        throw input_error("find_exact_overlaps: level " + std::to_string(max_n) +
                          " exceeds cap " + std::to_string(cap));
    }

    std::vector<CollisionRecord> out;
    for (unsigned lvl = 1; lvl <= max_n; ++lvl) {
        const std::vector<BetaPolynomial> nums = detail::cylinder_numerators(params, lvl);
        std::map<std::vector<Rational>, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < nums.size(); ++i) {
            groups[value_key(nums[i])].push_back(i);
        }
        std::vector<std::pair<std::size_t, std::size_t>> level_pairs;
        for (const auto& [key, members] : groups) {
            for (std::size_t a = 0; a < members.size(); ++a) {
                for (std::size_t b = a + 1; b < members.size(); ++b) {
                    level_pairs.emplace_back(members[a], members[b]);
                }
            }
        }
        std::sort(level_pairs.begin(), level_pairs.end());
        for (const auto& [i, j] : level_pairs) {
            out.push_back({detail::word_from_index(i, lvl), detail::word_from_index(j, lvl), lvl});
        }
    }
    return out;
}

// The linear relation on (s, t) imposed by a cylinder collision: with L1/L2/L3
// the digit-class polynomials of each word, phi_a(0) = phi_b(0) is equivalent
// to A*s + B*t = C for A = L2a - L2b, B = L3a - L3b, C = L1b - L1a.
inline OverlapRelation overlap_relation(const IFSParams& params, const Word& a, const Word& b) {
    if (!params.s.is_exact() || !params.t.is_exact()) {
        throw input_error("overlap_relation: relation extraction requires exact parameters");
    }
    if (a.length() != b.length()) throw input_error("overlap_relation: words differ in length");
    if (a.letters == b.letters) throw input_error("overlap_relation: words are identical");

    const detail::LetterClassPolys ca = detail::letter_class_polys(params.base, a);
    const detail::LetterClassPolys cb = detail::letter_class_polys(params.base, b);
    BetaPolynomial A = bp_sub(ca.s_cls, cb.s_cls);
    BetaPolynomial B = bp_sub(ca.t_cls, cb.t_cls);
    BetaPolynomial C = bp_sub(cb.ones, ca.ones);

    const BetaRational& s = params.s.exact_ratio();
    const BetaRational& t = params.t.exact_ratio();
    const BetaPolynomial lhs = bp_add(bp_mul(A, bp_mul(s.numerator(), t.denominator())),
                                      bp_mul(B, bp_mul(t.numerator(), s.denominator())));
    const BetaPolynomial rhs = bp_mul(C, bp_mul(s.denominator(), t.denominator()));
    if (!is_value_zero(bp_sub(lhs, rhs))) {
        throw input_error("overlap_relation: the words do not collide");
    }

    std::optional<SolvedOverlap> solved;
    if (!is_value_zero(A)) {
        solved = SolvedOverlap{bp_neg(B), A, C};
    }
    return {std::move(A), std::move(B), std::move(C), std::move(solved)};
}

// Bracket on log(branch_count) / log(base), the similarity dimension of an
// equicontractive system with the given number of branches and ratio 1/base.
inline RationalInterval similarity_dimension(const AlgebraicReal& beta,
                                             unsigned branch_count = 4,
                                             unsigned precision = 64) {
    if (branch_count < 2) {
        throw input_error("similarity_dimension: need at least two branches");
    }
    if (precision == 0) throw input_error("similarity_dimension: precision must be positive");
    if (beta.cmp(Rational(2)) < 0) {
        throw input_error("similarity_dimension: base must be at least 2");
    }

    const Log2Bracket den = log2_bracket(beta, precision);
    Log2Bracket num;
    const BigInt m(branch_count);
    if (is_power_of_two(m)) {
        const BigInt b = floor_log2(m) * BigInt(precision);
        num = Log2Bracket{b, precision, true};
    } else {
        const Rational lo(branch_count - 1);
        const Rational hi(branch_count + 1);
        const AlgebraicReal marg = make_algebraic_real(
            parse_polynomial("x-" + std::to_string(branch_count)), RationalInterval{lo, hi});
        num = log2_bracket(marg, precision);
    }

    const Rational lo = num.lower() / den.upper();
    const Rational hi = num.upper() / den.lower();
    return {lo, hi};
}

} // namespace betaifs
