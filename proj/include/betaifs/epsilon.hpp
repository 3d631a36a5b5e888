#pragma once

// Target precision sequences: geometric r^n, super-exponential r^(n^2),
// factorial 1/n!, and explicit tables with a repeat-last tail. Constructions
// consume the running-minimum (monotone nonincreasing) view produced by
// normalize_epsilon. required_exponent works in the dyadic calculus, so it
// stays well-defined at indices like 10^16 where the value itself cannot be
// materialized; for power-of-two ratios it is the true minimum everywhere.

#include "betaifs/numeric.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace betaifs {

enum class EpsilonKind { geometric, super_exponential, factorial, table };

class EpsilonSequence {
public:
    static EpsilonSequence geometric(Rational ratio) {
        require_positive_ratio(ratio);
        EpsilonSequence s;
        s.kind_ = EpsilonKind::geometric;
        s.ratio_ = std::move(ratio);
        return s;
    }

    static EpsilonSequence super_exponential(Rational ratio) {
        require_positive_ratio(ratio);
        EpsilonSequence s;
        s.kind_ = EpsilonKind::super_exponential;
        s.ratio_ = std::move(ratio);
        return s;
    }

    static EpsilonSequence factorial() {
        EpsilonSequence s;
        s.kind_ = EpsilonKind::factorial;
        return s;
    }

    // Indices past the end repeat the last entry.
    static EpsilonSequence table(std::vector<Rational> entries) {
        if (entries.empty()) throw input_error("epsilon table: no entries");
        for (const Rational& v : entries) {
            if (v <= 0) throw input_error("epsilon table: nonpositive entry");
        }
        EpsilonSequence s;
        s.kind_ = EpsilonKind::table;
        s.entries_ = std::move(entries);
        return s;
    }

    EpsilonKind kind() const { return kind_; }
    bool is_normalized() const { return normalized_; }

    const Rational& ratio() const {
        if (kind_ != EpsilonKind::geometric && kind_ != EpsilonKind::super_exponential) {
            throw input_error("EpsilonSequence: kind has no ratio");
        }
        return ratio_;
    }

    const std::vector<Rational>& entries() const {
        if (kind_ != EpsilonKind::table) {
            throw input_error("EpsilonSequence: kind has no table entries");
        }
        return entries_;
    }

    // eps_n as an exact rational (running-minimum view once normalized).
    // Indices whose value would not fit the materialization cap are refused.
    Rational value_at(const BigInt& n) const {
        if (n < 1) throw input_error("EpsilonSequence: index must be >= 1");
        switch (kind_) {
        case EpsilonKind::geometric: {
            if (normalized_ && ratio_ >= 1) return ratio_;
            return pow_rational(ratio_, n);
        }
        case EpsilonKind::super_exponential: {
            if (normalized_ && ratio_ >= 1) return ratio_;
            return pow_rational(ratio_, n * n);
        }
        case EpsilonKind::factorial: {
            // bits(n!) is within a constant of the ceil-log sum below; the
            // closed form doubles as the materialization guard.
            if (exponent_sum_ceil_log(n) > BigInt(kMaterializeBitCap)) {
                throw resource_error("epsilon factorial: index too large to materialize");
            }
            const std::size_t nn = to_size(n, kMaterializeBitCap, "factorial index");
            BigInt f = 1;
            for (std::size_t i = 2; i <= nn; ++i) f *= i;
            return Rational(1, f);
        }
        case EpsilonKind::table: {
            const BigInt last(entries_.size());
            const std::size_t idx = to_size(n <= last ? n : last,
                                            entries_.size(), "table index") - 1;
            return entries_[idx];
        }
        }
        throw input_error("EpsilonSequence: unknown kind");
    }

    // Minimal e >= 0 with 2^-e <= eps_n in the dyadic calculus: exact while
    // the value is affordable, otherwise n times the per-step exponent
    // (identical to the exact answer for power-of-two ratios, merely sound
    // for the rest). Factorial uses the closed form for sum ceil(log2 i).
    BigInt required_exponent(const BigInt& n) const {
        if (!normalized_) {
            throw input_error("required_exponent: sequence must be normalized first");
        }
        if (n < 1) throw input_error("required_exponent: index must be >= 1");
        switch (kind_) {
        case EpsilonKind::geometric:
            return ratio_exponent(n);
        case EpsilonKind::super_exponential:
            return ratio_exponent(n * n);
        case EpsilonKind::factorial:
            return exponent_sum_ceil_log(n);
        case EpsilonKind::table: {
            const BigInt last(entries_.size());
            const std::size_t idx = to_size(n <= last ? n : last,
                                            entries_.size(), "table index") - 1;
            return reciprocal_exponent(entries_[idx]);
        }
        }
        throw input_error("EpsilonSequence: unknown kind");
    }

    std::string spec_string() const {
        switch (kind_) {
        case EpsilonKind::geometric: return "geom:" + format_rational(ratio_);
        case EpsilonKind::super_exponential: return "superexp:" + format_rational(ratio_);
        case EpsilonKind::factorial: return "factorial";
        case EpsilonKind::table: {
            std::string out = "table:";
            for (std::size_t i = 0; i < entries_.size(); ++i) {
                if (i) out += ',';
                out += format_rational(entries_[i]);
            }
            return out;
        }
        }
        throw input_error("EpsilonSequence: unknown kind");
    }

    static EpsilonSequence parse(std::string_view text) {
        if (text == "factorial") return factorial();
        if (text.rfind("geom:", 0) == 0) {
            return geometric(parse_rational(text.substr(5)));
        }
        if (text.rfind("superexp:", 0) == 0) {
            return super_exponential(parse_rational(text.substr(9)));
        }
        if (text.rfind("table:", 0) == 0) {
            std::vector<Rational> entries;
            std::string_view rest = text.substr(6);
            while (!rest.empty()) {
                const std::size_t comma = rest.find(',');
                entries.push_back(parse_rational(rest.substr(0, comma)));
                if (comma == std::string_view::npos) break;
                rest = rest.substr(comma + 1);
            }
            return table(std::move(entries));
        }
        throw input_error("epsilon spec: expected geom:r, superexp:r, factorial, "
                          "or table:a,b,...; got '" + std::string(text) + "'");
    }

    friend bool operator==(const EpsilonSequence& a, const EpsilonSequence& b) {
        return a.kind_ == b.kind_ && a.ratio_ == b.ratio_ &&
               a.entries_ == b.entries_ && a.normalized_ == b.normalized_;
    }

    friend EpsilonSequence normalize_epsilon(const EpsilonSequence& seq);

private:
    EpsilonSequence() = default;

    static void require_positive_ratio(const Rational& r) {
        if (r <= 0) throw input_error("epsilon ratio must be positive");
    }

    // Minimal e >= 0 with 2^-e <= r for an exact rational r.
    static BigInt reciprocal_exponent(const Rational& r) {
        if (r >= 1) return 0;
        return -floor_log2(r);
    }

    BigInt ratio_exponent(const BigInt& m) const {
        if (ratio_ >= 1) return 0;
        const BigInt cost = m * BigInt(bit_length(numerator(ratio_)) +
                                       bit_length(denominator(ratio_)));
        if (cost <= BigInt(kExactBitBudget)) {
            return reciprocal_exponent(pow_rational(ratio_, m, kMaterializeBitCap));
        }
        return m * reciprocal_exponent(ratio_);
    }

    // sum_{i=2}^{n} ceil(log2 i) = n*c - 2^c + 1 with c = ceil(log2 n);
    // equals the minimal dyadic exponent for 1/n! under the sound
    // per-factor rounding and stays computable at astronomical n.
    static BigInt exponent_sum_ceil_log(const BigInt& n) {
        if (n <= 1) return 0;
        const BigInt c = ceil_log2(n);
        return n * c - (BigInt(1) << to_size(c, kMaterializeBitCap, "log index")) + 1;
    }

    EpsilonKind kind_ = EpsilonKind::geometric;
    Rational ratio_ = Rational(1, 2);
    std::vector<Rational> entries_;
    bool normalized_ = false;
};

// Running-minimum normalization; idempotent. Geometric and super-exponential
// sequences with ratio < 1 and the factorial sequence are already
// nonincreasing; tables are rewritten entrywise.
inline EpsilonSequence normalize_epsilon(const EpsilonSequence& seq) {
    EpsilonSequence out = seq;
    if (out.kind_ == EpsilonKind::table) {
        Rational running = out.entries_.front();
        for (Rational& v : out.entries_) {
            if (v < running) running = v;
            v = running;
        }
    }
    out.normalized_ = true;
    return out;
}

} // namespace betaifs
