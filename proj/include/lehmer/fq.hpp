#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "lehmer/bigint.hpp"
#include "lehmer/errors.hpp"
#include "lehmer/intpoly.hpp"
#include "lehmer/smallfp.hpp"

namespace lehmer {

// F_{p^f} = F_p[t]/(modulus), with the modulus chosen deterministically as the
// lexicographically smallest monic irreducible of degree f (coefficient tuple
// ordered from the constant term). Same (p, f) always builds the same field.
struct FqField {
    std::uint64_t p = 0;
    unsigned f = 0;
    fp::Poly modulus;     // monic, degree f, over F_p
    IntPoly modulus_lift; // integer lift with coefficients in [0, p)

    std::uint64_t q_u64() const {
        std::uint64_t q = 1;
        for (unsigned i = 0; i < f; ++i) q *= p;
        return q;
    }
    BigInt q() const { return pow_ui(BigInt(static_cast<unsigned long>(p)), f); }

    bool operator==(const FqField& o) const { return p == o.p && f == o.f && modulus == o.modulus; }
};

// Element of F_{p^f}: fixed coefficient array, entries in [0, p), zero-padded
// beyond the field degree so comparisons need no field context. Fixed storage
// keeps residue arithmetic allocation-free in the Hensel recursion hot path.
struct FqElem {
    static constexpr unsigned kMaxDegree = 8;
    std::array<std::uint64_t, kMaxDegree> c{};

    bool is_zero() const {
        for (auto v : c)
            if (v) return false;
        return true;
    }
    // Index encoding sum c_i p^i; also the deterministic report/sort order.
    std::uint64_t encode(const FqField& k) const {
        std::uint64_t idx = 0, w = 1;
        for (unsigned i = 0; i < k.f; ++i) {
            idx += c[i] * w;
            w *= k.p;
        }
        return idx;
    }
    bool operator==(const FqElem& o) const { return c == o.c; }
    bool operator<(const FqElem& o) const { // lex from the top coefficient
        for (std::size_t i = kMaxDegree; i-- > 0;) {
            if (c[i] != o.c[i]) return c[i] < o.c[i];
        }
        return false;
    }
};

namespace fq_ops {

inline FqElem zero(const FqField&) { return FqElem{}; }

inline FqElem from_scalar(const FqField& k, std::uint64_t v) {
    FqElem e = zero(k);
    e.c[0] = v % k.p;
    return e;
}

inline FqElem from_index(const FqField& k, std::uint64_t idx) {
    FqElem e = zero(k);
    for (unsigned i = 0; i < k.f; ++i) {
        e.c[i] = idx % k.p;
        idx /= k.p;
    }
    return e;
}

inline FqElem add(const FqField& k, const FqElem& a, const FqElem& b) {
    FqElem r = a;
    for (unsigned i = 0; i < k.f; ++i) r.c[i] = (r.c[i] + b.c[i]) % k.p;
    return r;
}

inline FqElem sub(const FqField& k, const FqElem& a, const FqElem& b) {
    FqElem r = a;
    for (unsigned i = 0; i < k.f; ++i) r.c[i] = (r.c[i] + k.p - b.c[i]) % k.p;
    return r;
}

inline FqElem neg(const FqField& k, const FqElem& a) { return sub(k, zero(k), a); }

inline FqElem mul(const FqField& k, const FqElem& a, const FqElem& b) {
    const unsigned f = k.f;
    const std::uint64_t p = k.p;
    FqElem r{};
    if (f == 1) {
        r.c[0] = fp::mulmod(a.c[0], b.c[0], p);
        return r;
    }
    // schoolbook product, then reduce by the monic modulus; accumulators stay
    // far below 128 bits since p^2 < 2^62 for f >= 2
    unsigned __int128 prod[2 * FqElem::kMaxDegree] = {};
    for (unsigned i = 0; i < f; ++i) {
        if (!a.c[i]) continue;
        for (unsigned j = 0; j < f; ++j)
            prod[i + j] += static_cast<unsigned __int128>(a.c[i]) * b.c[j];
    }
    for (unsigned t = 2 * f - 2; t >= f; --t) {
        std::uint64_t v = static_cast<std::uint64_t>(prod[t] % p);
        prod[t] = 0;
        if (!v) continue;
        for (unsigned j = 0; j < f; ++j) {
            std::uint64_t m = k.modulus[j];
            if (m) prod[t - f + j] += static_cast<unsigned __int128>(v) * (p - m);
        }
    }
    for (unsigned i = 0; i < f; ++i) r.c[i] = static_cast<std::uint64_t>(prod[i] % p);
    return r;
}

inline FqElem pow(const FqField& k, FqElem a, BigInt e) {
    FqElem r = from_scalar(k, 1);
    const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (sign(e) == 0) return r;
    for (std::size_t i = bits; i-- > 0;) {
        r = mul(k, r, r);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(k, r, a);
    }
    return r;
}

inline FqElem inv(const FqField& k, const FqElem& a) {
    if (a.is_zero()) throw invalid_input("inverse of zero field element");
    return pow(k, a, k.q() - 2);
}

} // namespace fq_ops

// Polynomial over F_q, ascending coefficients, trimmed.
struct FqPoly {
    std::vector<FqElem> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    bool operator==(const FqPoly& o) const { return c == o.c; }
};

namespace fq_ops {

inline void trim(FqPoly& a) {
    while (!a.c.empty() && a.c.back().is_zero()) a.c.pop_back();
}

inline FqPoly poly_zero() { return {}; }

inline FqPoly poly_x(const FqField& k) {
    FqPoly r;
    r.c = {zero(k), from_scalar(k, 1)};
    return r;
}

inline FqPoly poly_constant(const FqField& k, const FqElem& e) {
    FqPoly r;
    r.c = {e};
    trim(r);
    return r;
}

inline FqPoly add(const FqField& k, const FqPoly& a, const FqPoly& b) {
    FqPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), zero(k));
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = add(k, r.c[i], b.c[i]);
    trim(r);
    return r;
}

inline FqPoly sub(const FqField& k, const FqPoly& a, const FqPoly& b) {
    FqPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), zero(k));
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = sub(k, r.c[i], b.c[i]);
    trim(r);
    return r;
}

inline FqPoly mul(const FqField& k, const FqPoly& a, const FqPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    FqPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, zero(k));
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = add(k, r.c[i + j], mul(k, a.c[i], b.c[j]));
    }
    trim(r);
    return r;
}

inline FqPoly scale(const FqField& k, const FqPoly& a, const FqElem& s) {
    FqPoly r = a;
    for (auto& v : r.c) v = mul(k, v, s);
    trim(r);
    return r;
}

inline FqPoly make_monic(const FqField& k, const FqPoly& a) {
    if (a.is_zero()) return a;
    return scale(k, a, inv(k, a.c.back()));
}

inline FqPoly mod(const FqField& k, FqPoly a, const FqPoly& m) {
    if (m.is_zero()) throw internal_error("FqPoly mod by zero");
    const int dm = m.degree();
    const FqElem inv_lm = inv(k, m.c.back());
    while (a.degree() >= dm) {
        const int da = a.degree();
        FqElem q = mul(k, a.c.back(), inv_lm);
        for (int j = 0; j <= dm; ++j) {
            auto& slot = a.c[static_cast<std::size_t>(da - dm + j)];
            slot = sub(k, slot, mul(k, q, m.c[static_cast<std::size_t>(j)]));
        }
        trim(a);
    }
    return a;
}

inline std::pair<FqPoly, FqPoly> divmod(const FqField& k, FqPoly a, const FqPoly& m) {
    if (m.is_zero()) throw internal_error("FqPoly divmod by zero");
    const int dm = m.degree();
    const FqElem inv_lm = inv(k, m.c.back());
    FqPoly q;
    if (a.degree() >= dm) q.c.assign(static_cast<std::size_t>(a.degree() - dm + 1), zero(k));
    while (a.degree() >= dm) {
        const int da = a.degree();
        FqElem c = mul(k, a.c.back(), inv_lm);
        q.c[static_cast<std::size_t>(da - dm)] = c;
        for (int j = 0; j <= dm; ++j) {
            auto& slot = a.c[static_cast<std::size_t>(da - dm + j)];
            slot = sub(k, slot, mul(k, c, m.c[static_cast<std::size_t>(j)]));
        }
        trim(a);
    }
    trim(q);
    return {std::move(q), std::move(a)};
}

inline FqPoly gcd(const FqField& k, FqPoly a, FqPoly b) {
    while (!b.is_zero()) {
        FqPoly r = mod(k, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(k, a);
}

inline FqPoly powmod(const FqField& k, FqPoly base, const BigInt& e, const FqPoly& m) {
    FqPoly r = poly_constant(k, from_scalar(k, 1));
    base = mod(k, std::move(base), m);
    if (sign(e) == 0) return mod(k, r, m);
    const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        r = mod(k, mul(k, r, r), m);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mod(k, mul(k, r, base), m);
    }
    return r;
}

inline FqElem eval(const FqField& k, const FqPoly& a, const FqElem& x) {
    FqElem acc = zero(k);
    for (std::size_t i = a.c.size(); i-- > 0;) acc = add(k, mul(k, acc, x), a.c[i]);
    return acc;
}

inline FqPoly deriv(const FqField& k, const FqPoly& a) {
    if (a.c.size() <= 1) return {};
    FqPoly r;
    r.c.assign(a.c.size() - 1, zero(k));
    for (std::size_t i = 1; i < a.c.size(); ++i) {
        FqElem s = from_scalar(k, static_cast<std::uint64_t>(i % k.p));
        r.c[i - 1] = mul(k, a.c[i], s);
    }
    trim(r);
    return r;
}

} // namespace fq_ops

// Deterministic field construction. Cached: field construction enumerates
// monic polynomials until the first irreducible, which is wasteful to repeat
// inside scans.
inline std::shared_ptr<const FqField> fq_construct(std::uint64_t p, unsigned f) {
    if (!is_prime_u64(p)) throw invalid_input("fq_construct: p must be prime");
    if (f < 1 || f > 8) throw invalid_input("fq_construct: level out of range");
    {
        unsigned __int128 q = 1;
        for (unsigned i = 0; i < f; ++i) {
            q *= p;
            if (q > (static_cast<unsigned __int128>(1) << 62))
                throw invalid_input("fq_construct: p^f too large");
        }
    }

    static std::mutex cache_mutex;
    static std::map<std::pair<std::uint64_t, unsigned>, std::shared_ptr<const FqField>> cache;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find({p, f});
        if (it != cache.end()) return it->second;
    }

    auto field = std::make_shared<FqField>();
    field->p = p;
    field->f = f;
    if (f == 1) {
        field->modulus = {0, 1}; // t
    } else {
        // Lexicographically first monic irreducible, constant term varying slowest.
        std::vector<std::uint64_t> tuple(f, 0);
        for (;;) {
            fp::Poly cand(tuple.begin(), tuple.end());
            cand.push_back(1);
            if (fp::is_irreducible(cand, p)) {
                field->modulus = std::move(cand);
                break;
            }
            std::size_t i = f;
            while (i-- > 0) {
                if (++tuple[i] < p) break;
                tuple[i] = 0;
                if (i == 0) throw internal_error("no irreducible of requested degree found");
            }
        }
    }
    {
        std::vector<BigInt> lift(field->modulus.size());
        for (std::size_t i = 0; i < lift.size(); ++i)
            lift[i] = BigInt(static_cast<unsigned long>(field->modulus[i]));
        field->modulus_lift = IntPoly(std::move(lift));
    }

    std::lock_guard<std::mutex> lock(cache_mutex);
    auto [it, inserted] = cache.try_emplace({p, f}, field);
    return it->second;
}

// Coefficientwise reduction of an integer polynomial into F_q (prime subfield image).
inline FqPoly fq_reduce(const IntPoly& f, const FqField& k) {
    FqPoly r;
    r.c.reserve(f.coeffs().size());
    for (const auto& a : f.coeffs()) {
        BigInt m = a % BigInt(static_cast<unsigned long>(k.p));
        if (sign(m) < 0) m += static_cast<unsigned long>(k.p);
        r.c.push_back(fq_ops::from_scalar(k, m.get_ui()));
    }
    fq_ops::trim(r);
    return r;
}

// Distinct roots of g in F_q: gcd with x^q - x, then seeded equal-degree
// splitting down to linear factors. Returns roots sorted by index encoding.
inline std::vector<FqElem> fq_roots(const FqPoly& g, const FqField& k, std::uint64_t seed = 0) {
    using namespace fq_ops;
    if (g.is_zero()) throw invalid_input("fq_roots: zero polynomial");
    std::vector<FqElem> roots;
    if (g.degree() < 1) return roots;

    FqPoly gm = make_monic(k, g);
    FqPoly xq = powmod(k, poly_x(k), k.q(), gm);
    FqPoly linear_product = gcd(k, gm, sub(k, xq, poly_x(k)));
    if (linear_product.degree() < 1) return roots;

    SplitMix64 rng(mix_seed(seed ^ 0x51ed2701a2b4c3d5ULL, (k.p << 8) ^ k.f));
    std::vector<FqPoly> stack{linear_product};
    while (!stack.empty()) {
        FqPoly r = std::move(stack.back());
        stack.pop_back();
        if (r.degree() == 1) {
            // monic: root = -c0
            roots.push_back(neg(k, r.c[0]));
            continue;
        }
        for (;;) {
            FqPoly splitter;
            if (k.p != 2) {
                // gcd(r, (x+a)^{(q-1)/2} - 1)
                FqElem a = from_index(k, rng.below(k.q_u64()));
                FqPoly shifted = poly_x(k);
                shifted.c[0] = a;
                FqPoly w = powmod(k, shifted, (k.q() - 1) / 2, r);
                splitter = sub(k, w, poly_constant(k, from_scalar(k, 1)));
            } else {
                // Trace map sum_{i<f} (a x)^{2^i}, F_2-linear in x.
                FqElem a = from_index(k, rng.below(k.q_u64()));
                if (a.is_zero()) continue;
                FqPoly ax = poly_constant(k, a);
                ax = mul(k, ax, poly_x(k));
                FqPoly term = mod(k, ax, r);
                FqPoly acc = term;
                for (unsigned i = 1; i < k.f; ++i) {
                    term = mod(k, mul(k, term, term), r);
                    acc = add(k, acc, term);
                }
                splitter = acc;
            }
            if (splitter.is_zero()) continue;
            FqPoly d1 = gcd(k, r, splitter);
            if (d1.degree() > 0 && d1.degree() < r.degree()) {
                stack.push_back(divmod(k, r, d1).first);
                stack.push_back(std::move(d1));
                break;
            }
        }
    }
    std::sort(roots.begin(), roots.end(),
              [&](const FqElem& a, const FqElem& b) { return a.encode(k) < b.encode(k); });
    return roots;
}

} // namespace lehmer
