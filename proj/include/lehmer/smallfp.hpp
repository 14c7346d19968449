#pragma once

#include <cstdint>
#include <tuple>
#include <utility>
#include <vector>

#include "lehmer/bigint.hpp"
#include "lehmer/errors.hpp"
#include "lehmer/intpoly.hpp"

// Dense polynomial arithmetic over F_p for machine-word primes. This backs
// mod-p irreducibility certificates, the Hensel/Zassenhaus fallback, and
// deterministic construction of F_{p^f} moduli.

namespace lehmer::fp {

using Poly = std::vector<std::uint64_t>; // ascending coefficients, trimmed

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
    // p prime, a != 0 mod p
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a % p);
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt;
        t = nt; nt = tmp;
        tmp = r - q * nr;
        r = nr; nr = tmp;
    }
    if (r != 1) throw internal_error("invmod: not invertible");
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

inline void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int deg(const Poly& f) { return static_cast<int>(f.size()) - 1; }

inline Poly reduce(const IntPoly& f, std::uint64_t p) {
    Poly r(f.coeffs().size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        BigInt m = f[i] % BigInt(static_cast<unsigned long>(p));
        if (sign(m) < 0) m += static_cast<unsigned long>(p);
        r[i] = m.get_ui();
    }
    trim(r);
    return r;
}

inline Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % p;
    }
    trim(r);
    return r;
}

inline Poly add(const Poly& a, const Poly& b, std::uint64_t p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + b[i]) % p;
    trim(r);
    return r;
}

inline Poly sub(const Poly& a, const Poly& b, std::uint64_t p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + p - b[i]) % p;
    trim(r);
    return r;
}

inline Poly scale(const Poly& a, std::uint64_t k, std::uint64_t p) {
    Poly r(a);
    for (auto& v : r) v = mulmod(v, k, p);
    trim(r);
    return r;
}

inline Poly make_monic(const Poly& a, std::uint64_t p) {
    if (a.empty()) return a;
    return scale(a, invmod(a.back(), p), p);
}

inline Poly mod(Poly a, const Poly& m, std::uint64_t p) {
    const int dm = deg(m);
    if (dm < 0) throw internal_error("fp::mod by zero");
    const std::uint64_t inv_lm = invmod(m.back(), p);
    while (deg(a) >= dm) {
        const int da = deg(a);
        std::uint64_t q = mulmod(a.back(), inv_lm, p);
        for (int j = 0; j <= dm; ++j)
            a[static_cast<std::size_t>(da - dm + j)] =
                (a[static_cast<std::size_t>(da - dm + j)] + p - mulmod(q, m[static_cast<std::size_t>(j)], p)) % p;
        trim(a);
    }
    return a;
}

inline std::pair<Poly, Poly> divmod(Poly a, const Poly& m, std::uint64_t p) {
    const int dm = deg(m);
    if (dm < 0) throw internal_error("fp::divmod by zero");
    const std::uint64_t inv_lm = invmod(m.back(), p);
    Poly q;
    if (deg(a) >= dm) q.assign(static_cast<std::size_t>(deg(a) - dm + 1), 0);
    while (deg(a) >= dm) {
        const int da = deg(a);
        std::uint64_t c = mulmod(a.back(), inv_lm, p);
        q[static_cast<std::size_t>(da - dm)] = c;
        for (int j = 0; j <= dm; ++j)
            a[static_cast<std::size_t>(da - dm + j)] =
                (a[static_cast<std::size_t>(da - dm + j)] + p - mulmod(c, m[static_cast<std::size_t>(j)], p)) % p;
        trim(a);
    }
    trim(q);
    return {std::move(q), std::move(a)};
}

inline Poly mulmod_poly(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
    return mod(mul(a, b, p), m, p);
}

inline Poly gcd(Poly a, Poly b, std::uint64_t p) {
    while (!b.empty()) {
        Poly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a, p);
}

// Returns (g, s, t) with s*a + t*b = g = monic gcd(a, b).
inline std::tuple<Poly, Poly, Poly> extgcd(Poly a, Poly b, std::uint64_t p) {
    Poly r0 = std::move(a), r1 = std::move(b);
    Poly s0{1}, s1{}, t0{}, t1{1};
    while (!r1.empty()) {
        auto [q, r] = divmod(r0, r1, p);
        r0 = std::move(r1); r1 = std::move(r);
        Poly s2 = sub(s0, mul(q, s1, p), p);
        s0 = std::move(s1); s1 = std::move(s2);
        Poly t2 = sub(t0, mul(q, t1, p), p);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    if (r0.empty()) return {r0, s0, t0};
    std::uint64_t inv = invmod(r0.back(), p);
    return {scale(r0, inv, p), scale(s0, inv, p), scale(t0, inv, p)};
}

inline Poly deriv(const Poly& a, std::uint64_t p) {
    if (a.size() <= 1) return {};
    Poly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = mulmod(a[i], i % p, p);
    trim(r);
    return r;
}

// base^e mod m with an arbitrary-precision exponent.
inline Poly powmod_poly(Poly base, const BigInt& e, const Poly& m, std::uint64_t p) {
    Poly r{1};
    base = mod(std::move(base), m, p);
    const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        r = mulmod_poly(r, r, m, p);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mulmod_poly(r, base, m, p);
    }
    return r;
}

// x^{p^k} mod m by iterated Frobenius.
inline Poly frobenius_power(const Poly& m, unsigned k, std::uint64_t p) {
    Poly x{0, 1};
    Poly u = mod(x, m, p);
    for (unsigned i = 0; i < k; ++i) u = powmod_poly(u, BigInt(static_cast<unsigned long>(p)), m, p);
    return u;
}

// Rabin's test: f irreducible over F_p iff x^{p^d} = x mod f and
// gcd(x^{p^{d/l}} - x, f) = 1 for every prime l | d.
inline bool is_irreducible(const Poly& f, std::uint64_t p) {
    const int d = deg(f);
    if (d <= 0) return false;
    if (d == 1) return true;
    Poly fm = make_monic(f, p);
    const Poly x{0, 1};

    std::vector<unsigned> prime_divisors;
    {
        unsigned n = static_cast<unsigned>(d);
        for (unsigned q = 2; q * q <= n; ++q)
            if (n % q == 0) {
                prime_divisors.push_back(q);
                while (n % q == 0) n /= q;
            }
        if (n > 1) prime_divisors.push_back(n);
    }
    for (unsigned l : prime_divisors) {
        Poly u = frobenius_power(fm, static_cast<unsigned>(d) / l, p);
        Poly g = gcd(sub(u, x, p), fm, p);
        if (deg(g) != 0) return false;
    }
    Poly u = frobenius_power(fm, static_cast<unsigned>(d), p);
    return sub(u, x, p).empty();
}

// Distinct-degree then equal-degree factorization of a squarefree monic f.
// p must be odd (the only use sites choose an odd prime).
inline std::vector<Poly> factor_squarefree(Poly f, std::uint64_t p, std::uint64_t seed) {
    if (p == 2) throw internal_error("fp::factor_squarefree requires odd p");
    f = make_monic(f, p);
    std::vector<Poly> out;
    const Poly x{0, 1};
    SplitMix64 rng(mix_seed(seed, p));

    struct Task { Poly g; unsigned d; };
    std::vector<Task> eds_tasks;

    Poly h = mod(x, f, p);
    Poly rest = f;
    for (unsigned i = 1; deg(rest) >= static_cast<int>(2 * i); ++i) {
        h = powmod_poly(h, BigInt(static_cast<unsigned long>(p)), rest, p);
        Poly g = gcd(sub(h, x, p), rest, p);
        if (deg(g) > 0) {
            eds_tasks.push_back({g, i});
            rest = divmod(rest, g, p).first;
            h = mod(h, rest, p);
        }
    }
    if (deg(rest) > 0) out.push_back(make_monic(rest, p));

    for (auto& task : eds_tasks) {
        // Cantor-Zassenhaus splitting of a product of degree-d irreducibles.
        std::vector<Poly> stack{task.g};
        BigInt exponent = (pow_ui(BigInt(static_cast<unsigned long>(p)), task.d) - 1) / 2;
        while (!stack.empty()) {
            Poly g = std::move(stack.back());
            stack.pop_back();
            if (deg(g) == static_cast<int>(task.d)) {
                out.push_back(make_monic(g, p));
                continue;
            }
            for (;;) {
                Poly r(static_cast<std::size_t>(deg(g)), 0);
                for (auto& c : r) c = rng.below(p);
                trim(r);
                if (r.empty()) continue;
                Poly w = powmod_poly(r, exponent, g, p);
                if (w.empty()) continue;
                w[0] = (w[0] + p - 1) % p;
                trim(w);
                Poly d1 = gcd(w, g, p);
                if (deg(d1) > 0 && deg(d1) < deg(g)) {
                    stack.push_back(divmod(g, d1, p).first);
                    stack.push_back(std::move(d1));
                    break;
                }
            }
        }
    }
    return out;
}

} // namespace lehmer::fp
