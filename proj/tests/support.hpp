#pragma once

// Shared test utilities: a deterministic seedable generator (tests must not
// depend on the standard library's unspecified distribution algorithms) and
// random operand builders.

#include "betaifs/betaifs.hpp"

#include <cstdint>
#include <vector>

namespace testsupport {

// splitmix64: tiny, well-mixed, reproducible everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [lo, hi], inclusive.
    long long range(long long lo, long long hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long long>(next() % span);
    }

private:
    std::uint64_t state_;
};

inline betaifs::Rational random_rational(Rng& rng, long long num_abs,
                                         long long den_max) {
    const long long d = rng.range(1, den_max);
    const long long n = rng.range(-num_abs, num_abs);
    return betaifs::Rational(n, d);
}

// Uniform member of P(n, H) (degree <= n, height <= H).
inline betaifs::IntPolynomial random_poly(Rng& rng, unsigned n, long long H) {
    std::vector<betaifs::BigInt> c;
    c.reserve(n + 1);
    for (unsigned i = 0; i <= n; ++i) {
        c.emplace_back(rng.range(-H, H));
    }
    return betaifs::IntPolynomial(std::move(c));
}

inline betaifs::AlgebraicReal base_two() {
    return betaifs::make_algebraic_real(betaifs::parse_polynomial("x-2"),
                                        {betaifs::Rational(1), betaifs::Rational(3)});
}

inline betaifs::AlgebraicReal base_five_halves() {
    return betaifs::make_algebraic_real(betaifs::parse_polynomial("2x-5"),
                                        {betaifs::Rational(1), betaifs::Rational(3)});
}

inline betaifs::AlgebraicReal base_silver() { // 1 + sqrt(2)
    return betaifs::make_algebraic_real(betaifs::parse_polynomial("x^2-2x-1"),
                                        {betaifs::Rational(2), betaifs::Rational(3)});
}

} // namespace testsupport
