#pragma once

// Elements of Z[beta] carried as UNREDUCED polynomials in beta. The monomial
// structure is observable (digit-set membership reads it), so reduction
// modulo the minimal polynomial happens only inside value-level predicates.
//
// Representations are sparse maps from exponent to coefficient because the
// synthesis stages square their exponents at every step: by stage four the
// degrees pass 10^16 and no dense vector can exist. Value-level predicates
// densify on demand and are capped accordingly.

#include "betaifs/algebraic.hpp"
#include "betaifs/garsia.hpp"
#include "betaifs/interval.hpp"
#include "betaifs/numeric.hpp"
#include "betaifs/poly.hpp"

#include <map>
#include <utility>
#include <vector>

namespace betaifs {

// Largest degree a value-level predicate (zero test, sign, enclosure) will
// densify. Representation-level queries have no such limit.
inline constexpr std::size_t kValueDegreeCap = std::size_t{1} << 16;

class BetaPolynomial {
public:
    BetaPolynomial() = default;

    BetaPolynomial(AlgebraicReal base, const IntPolynomial& p)
        : base_(std::move(base)) {
        for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
            if (p[i] != 0) terms_[BigInt(i)] = p[i];
        }
    }

    BetaPolynomial(AlgebraicReal base, std::map<BigInt, BigInt> terms)
        : base_(std::move(base)), terms_(std::move(terms)) {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (it->first < 0) throw input_error("BetaPolynomial: negative exponent");
            it = it->second == 0 ? terms_.erase(it) : std::next(it);
        }
    }

    static BetaPolynomial constant(AlgebraicReal base, BigInt v) {
        BetaPolynomial r;
        r.base_ = std::move(base);
        if (v != 0) r.terms_[BigInt(0)] = std::move(v);
        return r;
    }

    // beta^e
    static BetaPolynomial power(AlgebraicReal base, BigInt e) {
        if (e < 0) throw input_error("BetaPolynomial::power: negative exponent");
        BetaPolynomial r;
        r.base_ = std::move(base);
        r.terms_[std::move(e)] = 1;
        return r;
    }

    const AlgebraicReal& base() const { return base_; }
    const std::map<BigInt, BigInt>& terms() const { return terms_; }
    bool is_zero_rep() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    // Degree of the representative; -1 for the zero polynomial.
    BigInt degree() const {
        return terms_.empty() ? BigInt(-1) : terms_.rbegin()->first;
    }

    BigInt height() const {
        BigInt h = 0;
        for (const auto& [e, c] : terms_) {
            BigInt a = boost::multiprecision::abs(c);
            if (a > h) h = a;
        }
        return h;
    }

    bool all_coeffs_nonnegative() const {
        for (const auto& [e, c] : terms_) {
            if (c < 0) return false;
        }
        return true;
    }

    // True iff every stored coefficient is 0 or 1 (the digit-set alphabet).
    bool coeffs_in_01() const {
        for (const auto& [e, c] : terms_) {
            if (c != 1) return false; // zeros are never stored
        }
        return true;
    }

    friend bool same_base(const BetaPolynomial& a, const BetaPolynomial& b) {
        return a.base_.id() == b.base_.id();
    }

    // Identical representative (not value equality).
    friend bool operator==(const BetaPolynomial& a, const BetaPolynomial& b) {
        return a.base_.id() == b.base_.id() && a.terms_ == b.terms_;
    }

    IntPolynomial to_dense(std::size_t degree_cap = kValueDegreeCap) const {
        if (terms_.empty()) return {};
        const std::size_t deg = to_size(degree(), degree_cap, "representative degree");
        std::vector<BigInt> c(deg + 1, BigInt(0));
        for (const auto& [e, v] : terms_) {
            c[static_cast<std::size_t>(e)] = v;
        }
        return IntPolynomial(std::move(c));
    }

private:
    AlgebraicReal base_;
    std::map<BigInt, BigInt> terms_; // exponent -> nonzero coefficient

    friend BetaPolynomial bp_add(const BetaPolynomial&, const BetaPolynomial&);
    friend BetaPolynomial bp_sub(const BetaPolynomial&, const BetaPolynomial&);
    friend BetaPolynomial bp_mul(const BetaPolynomial&, const BetaPolynomial&);
    friend BetaPolynomial bp_shift(const BetaPolynomial&, const BigInt&);
    friend BetaPolynomial bp_neg(const BetaPolynomial&);
};

namespace detail {

inline void require_same_base(const BetaPolynomial& a, const BetaPolynomial& b,
                              const char* op) {
    if (!same_base(a, b)) {
        throw input_error(std::string(op) + ": operands have different bases");
    }
}

} // namespace detail

inline BetaPolynomial bp_add(const BetaPolynomial& a, const BetaPolynomial& b) {
    detail::require_same_base(a, b, "bp_add");
    BetaPolynomial r = a;
    for (const auto& [e, c] : b.terms_) {
        auto [it, fresh] = r.terms_.try_emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) r.terms_.erase(it);
        }
    }
    return r;
}

inline BetaPolynomial bp_neg(const BetaPolynomial& a) {
    BetaPolynomial r = a;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

inline BetaPolynomial bp_sub(const BetaPolynomial& a, const BetaPolynomial& b) {
    detail::require_same_base(a, b, "bp_sub");
    return bp_add(a, bp_neg(b));
}

inline BetaPolynomial bp_mul(const BetaPolynomial& a, const BetaPolynomial& b) {
    detail::require_same_base(a, b, "bp_mul");
    std::map<BigInt, BigInt> terms;
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            BigInt e = ea + eb;
            BigInt prod = ca * cb;
            auto [it, fresh] = terms.try_emplace(std::move(e), std::move(prod));
            if (!fresh) {
                it->second += ca * cb;
                if (it->second == 0) terms.erase(it);
            }
        }
    }
    return BetaPolynomial(a.base(), std::move(terms));
}

// a * beta^e
inline BetaPolynomial bp_shift(const BetaPolynomial& a, const BigInt& e) {
    if (e < 0) throw input_error("bp_shift: negative shift");
    std::map<BigInt, BigInt> shifted;
    for (const auto& [ex, c] : a.terms_) {
        shifted.emplace(ex + e, c);
    }
    return BetaPolynomial(a.base(), std::move(shifted));
}

// Remainder of the representative modulo the minimal polynomial over Q, as a
// canonical coefficient vector (constant first, trailing zeros stripped).
// Two elements of Z[beta] have equal values iff their keys are equal,
// presuming minimality of the defining polynomial.
inline std::vector<Rational> value_key(const BetaPolynomial& a) {
    const IntPolynomial dense = a.to_dense();
    const IntPolynomial& m = a.base().minpoly();
    detail::QPoly r = detail::qp_mod(detail::qp_from(dense), detail::qp_from(m));
    return r;
}

inline bool is_value_zero(const BetaPolynomial& a) {
    if (a.is_zero_rep()) return true;
    return value_key(a).empty();
}

// Certified enclosure of the real value, refined until width <= target.
inline RationalInterval bp_enclosure(const BetaPolynomial& a,
                                     const Rational& target_width) {
    if (target_width <= 0) throw input_error("bp_enclosure: width must be positive");
    const IntPolynomial dense = a.to_dense();
    if (dense.is_zero()) return RationalInterval::point(0);
    // A rational base collapses to a point enclosure; any positive start works
    // because refinement is a no-op once the enclosure is already tight.
    Rational w = a.base().enclosure().width();
    if (w <= 0) w = 1;
    while (true) {
        const RationalInterval iv = dense.eval(a.base().refine_enclosure(w));
        if (iv.width() <= target_width) return iv;
        w /= 4;
    }
}

// Exact sign of the value. Zero is decided algebraically; a nonzero value is
// separated from zero by interval refinement, with the universal resultant
// bound certifying termination.
inline int sign_of(const BetaPolynomial& a) {
    if (a.is_zero_rep()) return 0;
    // Fast path: a nonzero representative with one-signed coefficients has
    // that sign at any positive base, and bases here satisfy beta >= 2.
    if (a.base().cmp(Rational(0)) > 0) {
        if (a.all_coeffs_nonnegative()) return 1;
        bool all_nonpos = true;
        for (const auto& [e, c] : a.terms()) {
            if (c > 0) { all_nonpos = false; break; }
        }
        if (all_nonpos) return -1;
    }
    if (is_value_zero(a)) return 0;
    const IntPolynomial dense = a.to_dense();
    const PolyClass cls{static_cast<unsigned>(dense.degree()), dense.height()};
    const Rational floor = sign_stopping_bound(a.base().minpoly(), cls);
    Rational w = a.base().enclosure().width();
    if (w <= 0) w = 1;
    while (true) {
        const RationalInterval iv = dense.eval(a.base().refine_enclosure(w));
        const int s = iv.sign_certain();
        if (s != 0) return s;
        if (iv.width() < floor) {
            // |value| < floor contradicts the lower bound for nonzero values;
            // the defining polynomial cannot have been minimal.
            throw input_error("sign_of: enclosure collapsed below the certified "
                              "floor; defining polynomial is not minimal");
        }
        w /= 4;
    }
}

// f/g with f, g in Z[beta]; canonicalized so the denominator value is
// positive. Ratios whose parts stay within the value cap admit exact
// comparisons; structurally positive denominators (nonzero 0/1-coefficient
// representatives) skip the value-level zero test entirely, which is what
// lets convergent ratios with astronomical degrees through.
class BetaRational {
public:
    BetaRational() = default;

    BetaRational(BetaPolynomial num, BetaPolynomial den)
        : num_(std::move(num)), den_(std::move(den)) {
        detail::require_same_base(num_, den_, "BetaRational");
        int s;
        if (!den_.is_zero_rep() && den_.all_coeffs_nonnegative() &&
            den_.base().cmp(Rational(0)) > 0) {
            s = 1;
        } else {
            s = sign_of(den_);
        }
        if (s == 0) throw input_error("BetaRational: denominator value is zero");
        if (s < 0) {
            num_ = bp_neg(num_);
            den_ = bp_neg(den_);
        }
    }

    static BetaRational from_rational(const AlgebraicReal& base, const Rational& r) {
        return BetaRational(
            BetaPolynomial::constant(base, betaifs::numerator(r)),
            BetaPolynomial::constant(base, betaifs::denominator(r)));
    }

    const BetaPolynomial& numerator() const { return num_; }
    const BetaPolynomial& denominator() const { return den_; }
    const AlgebraicReal& base() const { return num_.base(); }

    std::optional<Rational> exact_value() const {
        const auto b = base().exact_value();
        if (!b) return std::nullopt;
        const IntPolynomial dn = num_.to_dense();
        const IntPolynomial dd = den_.to_dense();
        return dn.eval(*b) / dd.eval(*b);
    }

    RationalInterval enclosure(const Rational& target_width) const {
        if (target_width <= 0) {
            throw input_error("BetaRational::enclosure: width must be positive");
        }
        const IntPolynomial dn = num_.to_dense();
        const IntPolynomial dd = den_.to_dense();
        Rational w = base().enclosure().width();
        if (w <= 0) w = 1;
        while (true) {
            const RationalInterval bi = base().refine_enclosure(w);
            const RationalInterval di = dd.eval(bi);
            if (di.sign_certain() > 0) {
                const RationalInterval iv = dn.eval(bi) / di;
                if (iv.width() <= target_width) return iv;
            }
            w /= 4;
        }
    }

private:
    BetaPolynomial num_, den_;
};

// Sign of (a - b), exact, via cross multiplication against the positive
// denominators.
inline int cmp(const BetaRational& a, const BetaRational& b) {
    return sign_of(bp_sub(bp_mul(a.numerator(), b.denominator()),
                          bp_mul(b.numerator(), a.denominator())));
}

} // namespace betaifs
