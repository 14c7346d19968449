#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "lehmer/errors.hpp"

namespace lehmer {

// Exact arbitrary-precision integers and rationals. GMP supplies the digits;
// everything algorithmic on top of them lives in this library.
using BigInt = mpz_class;

// Always reduced, denominator > 0 (mpq_class canonical form).
using Rational = mpq_class;

inline BigInt make_bigint(const std::string& decimal) {
    return BigInt(decimal, 10);
}

inline int sign(const BigInt& n) { return mpz_sgn(n.get_mpz_t()); }

// Largest k with p^k | n. n must be nonzero.
inline unsigned long padic_valuation(const BigInt& n, const BigInt& p) {
    if (sign(n) == 0) throw infinite_valuation();
    BigInt reduced;
    return mpz_remove(reduced.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

inline unsigned long padic_valuation(const BigInt& n, unsigned long p) {
    return padic_valuation(n, BigInt(static_cast<unsigned long>(p)));
}

// n / p^{ord_p(n)}.
inline BigInt remove_power(const BigInt& n, const BigInt& p) {
    if (sign(n) == 0) return n;
    BigInt reduced;
    mpz_remove(reduced.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
    return reduced;
}

inline BigInt pow_ui(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// Exact quotient; throws internal_error if the division is not exact.
inline BigInt divexact(const BigInt& a, const BigInt& b) {
    if (sign(b) == 0) throw internal_error("divexact by zero");
    if (!mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()))
        throw internal_error("divexact: inexact division");
    BigInt r;
    mpz_divexact(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline bool is_prime(const BigInt& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0; // 40 rounds: deterministic at word size
}

inline bool is_prime_u64(std::uint64_t n) { return is_prime(BigInt(static_cast<unsigned long>(n))); }

// ceil(sqrt(n)) for n >= 0.
inline BigInt isqrt_ceil(const BigInt& n) {
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    if (r * r < n) ++r;
    return r;
}

// Deterministic splittable PRNG behind every seeded randomized step;
// state is local to each caller, so runs are bit-reproducible.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }
};

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    SplitMix64 g(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
    return g.next();
}

} // namespace lehmer
