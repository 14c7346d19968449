#pragma once

#include <cstdint>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "lehmer/bigint.hpp"
#include "lehmer/errors.hpp"
#include "lehmer/intpoly.hpp"
#include "lehmer/resultant.hpp"
#include "lehmer/smallfp.hpp"

namespace lehmer {

struct IrreducibilityCertificate {
    enum class Verdict { irreducible, reducible, degree_one, unverified };
    Verdict verdict = Verdict::unverified;
    std::optional<std::uint64_t> witness_prime;                 // mod-p certificate
    std::optional<std::pair<IntPoly, IntPoly>> witness_factors; // multiply exactly to the input

    bool certified_irreducible() const {
        return verdict == Verdict::irreducible || verdict == Verdict::degree_one;
    }
};

struct FactorOptions {
    unsigned certificate_primes = 25; // mod-p certificates tried before the exact fallback
    long work_budget = 2'000'000;     // recombination candidates before giving up as unverified
    std::uint64_t seed = 0;
};

// Landau-Mignotte style factor coefficient bound: 2^d * sqrt(d+1) * H(f) * |a_d|.
inline BigInt landau_mignotte_bound(const IntPoly& f) {
    const unsigned long d = static_cast<unsigned long>(f.degree());
    return (BigInt(1) << d) * isqrt_ceil(BigInt(d + 1)) * f.height() * abs(f.leading());
}

namespace detail {

// ---- arithmetic on polynomials with coefficients in Z/m (m = p^k) ----

using ZmPoly = std::vector<BigInt>; // ascending, trimmed, coefficients in [0, m)

inline void zm_trim(ZmPoly& a) {
    while (!a.empty() && sign(a.back()) == 0) a.pop_back();
}

inline ZmPoly zm_from(const IntPoly& f, const BigInt& m) {
    ZmPoly r(f.coeffs().size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = f[i] % m;
        if (sign(r[i]) < 0) r[i] += m;
    }
    zm_trim(r);
    return r;
}

inline ZmPoly zm_reduce(const ZmPoly& f, const BigInt& m) {
    ZmPoly r(f);
    for (auto& v : r) {
        v %= m;
        if (sign(v) < 0) v += m;
    }
    zm_trim(r);
    return r;
}

inline ZmPoly zm_mul(const ZmPoly& a, const ZmPoly& b, const BigInt& m) {
    if (a.empty() || b.empty()) return {};
    ZmPoly r(a.size() + b.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sign(a[i]) == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    for (auto& v : r) v %= m;
    zm_trim(r);
    return r;
}

inline ZmPoly zm_add(const ZmPoly& a, const ZmPoly& b, const BigInt& m) {
    ZmPoly r(std::max(a.size(), b.size()), BigInt(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + b[i]) % m;
    zm_trim(r);
    return r;
}

inline ZmPoly zm_sub(const ZmPoly& a, const ZmPoly& b, const BigInt& m) {
    ZmPoly r(std::max(a.size(), b.size()), BigInt(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) {
        r[i] = (r[i] - b[i]) % m;
        if (sign(r[i]) < 0) r[i] += m;
    }
    zm_trim(r);
    return r;
}

// Division by a polynomial whose leading coefficient is a unit mod m.
inline std::pair<ZmPoly, ZmPoly> zm_divmod(ZmPoly a, const ZmPoly& h, const BigInt& m) {
    const int dh = static_cast<int>(h.size()) - 1;
    if (dh < 0) throw internal_error("zm_divmod by zero");
    BigInt inv_lh;
    if (mpz_invert(inv_lh.get_mpz_t(), h.back().get_mpz_t(), m.get_mpz_t()) == 0)
        throw internal_error("zm_divmod: leading coefficient not a unit");
    ZmPoly q;
    int da = static_cast<int>(a.size()) - 1;
    if (da >= dh) q.assign(static_cast<std::size_t>(da - dh + 1), BigInt(0));
    while (da >= dh) {
        BigInt c = (a[static_cast<std::size_t>(da)] * inv_lh) % m;
        q[static_cast<std::size_t>(da - dh)] = c;
        if (sign(c) != 0) {
            for (int j = 0; j <= dh; ++j) {
                auto& slot = a[static_cast<std::size_t>(da - dh + j)];
                slot = (slot - c * h[static_cast<std::size_t>(j)]) % m;
                if (sign(slot) < 0) slot += m;
            }
        }
        zm_trim(a);
        da = static_cast<int>(a.size()) - 1;
    }
    zm_trim(q);
    return {std::move(q), std::move(a)};
}

inline ZmPoly zm_from_fp(const fp::Poly& f) {
    ZmPoly r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = BigInt(static_cast<unsigned long>(f[i]));
    return r;
}

// Coefficients mapped to the symmetric range (-m/2, m/2].
inline IntPoly zm_symmetric(const ZmPoly& a, const BigInt& m) {
    std::vector<BigInt> r(a);
    BigInt half = m / 2;
    for (auto& v : r)
        if (v > half) v -= m;
    return IntPoly(std::move(r));
}

struct HenselPair {
    ZmPoly g, h, s, t;
};

// One quadratic lift step: modulus m -> m2 (m | m2 | m^2), preserving
// f = g*h and s*g + t*h = 1. g and h stay monic.
inline HenselPair hensel_step(const ZmPoly& f, const HenselPair& cur, const BigInt& m2) {
    const auto& [g, h, s, t] = cur;
    ZmPoly e = zm_sub(zm_reduce(f, m2), zm_mul(g, h, m2), m2);
    auto [q, r] = zm_divmod(zm_mul(s, e, m2), h, m2);
    ZmPoly gs = zm_add(g, zm_add(zm_mul(t, e, m2), zm_mul(q, g, m2), m2), m2);
    ZmPoly hs = zm_add(h, r, m2);
    if (gs.size() != g.size() || hs.size() != h.size() || gs.back() != 1 || hs.back() != 1)
        throw internal_error("hensel_step: factor degree drifted");

    ZmPoly b = zm_sub(zm_add(zm_mul(s, gs, m2), zm_mul(t, hs, m2), m2), ZmPoly{BigInt(1)}, m2);
    auto [c, d] = zm_divmod(zm_mul(s, b, m2), hs, m2);
    ZmPoly ss = zm_sub(s, d, m2);
    ZmPoly ts = zm_sub(zm_sub(t, zm_mul(t, b, m2), m2), zm_mul(c, gs, m2), m2);
    return {std::move(gs), std::move(hs), std::move(ss), std::move(ts)};
}

// Lift the monic factorization f = prod(local) from mod p to mod p^K.
inline std::vector<ZmPoly> hensel_lift_tree(const ZmPoly& f_modM, const std::vector<fp::Poly>& local,
                                            std::uint64_t p, unsigned K, const BigInt& M) {
    if (local.size() == 1) return {zm_reduce(f_modM, M)};

    const std::size_t half = local.size() / 2;
    fp::Poly g0{1}, h0{1};
    for (std::size_t i = 0; i < half; ++i) g0 = fp::mul(g0, local[i], p);
    for (std::size_t i = half; i < local.size(); ++i) h0 = fp::mul(h0, local[i], p);
    auto [gcd_gh, s0, t0] = fp::extgcd(g0, h0, p);
    if (fp::deg(gcd_gh) != 0) throw internal_error("hensel_lift_tree: factors not coprime");

    HenselPair cur{zm_from_fp(g0), zm_from_fp(h0), zm_from_fp(s0), zm_from_fp(t0)};
    BigInt m(static_cast<unsigned long>(p));
    unsigned k = 1;
    while (k < K) {
        unsigned k2 = std::min(2 * k, K);
        BigInt m2 = pow_ui(BigInt(static_cast<unsigned long>(p)), k2);
        cur = hensel_step(f_modM, cur, m2);
        m = m2;
        k = k2;
    }
    std::vector<fp::Poly> left(local.begin(), local.begin() + static_cast<std::ptrdiff_t>(half));
    std::vector<fp::Poly> right(local.begin() + static_cast<std::ptrdiff_t>(half), local.end());
    auto out = hensel_lift_tree(cur.g, left, p, K, M);
    auto rhs = hensel_lift_tree(cur.h, right, p, K, M);
    out.insert(out.end(), rhs.begin(), rhs.end());
    return out;
}

// Cheap deg-1 factor search; only attempted for modest constant/leading terms.
inline std::optional<std::pair<IntPoly, IntPoly>> rational_root_factor(const IntPoly& f) {
    const BigInt a0 = abs(f.constant_term()), ad = abs(f.leading());
    if (a0 > BigInt("1099511627776") || ad > BigInt("1099511627776")) return std::nullopt;

    auto divisors = [](const BigInt& n) {
        std::vector<BigInt> out;
        for (BigInt i(1); i * i <= n; ++i)
            if (mpz_divisible_p(n.get_mpz_t(), i.get_mpz_t())) {
                out.push_back(i);
                out.push_back(n / i);
            }
        return out;
    };
    for (const BigInt& r : divisors(a0))
        for (const BigInt& s : divisors(ad)) {
            if (gcd(r, s) != 1) continue;
            for (int sg : {1, -1}) {
                Rational x(sg * r, s);
                x.canonicalize();
                if (sign(f.eval(x).get_num()) == 0) {
                    std::vector<BigInt> lin{-sg * r, s};
                    IntPoly g = IntPoly(std::move(lin)).primitive_part();
                    return std::make_pair(g, f.divexact_by(g));
                }
            }
        }
    return std::nullopt;
}

} // namespace detail

// Exact irreducibility over Q: mod-p certificates first, then a full
// Hensel-lift-and-recombine factorization with the Landau-Mignotte bound.
// Fallbacks that blow the work budget come back unverified, never assumed.
inline IrreducibilityCertificate is_irreducible_over_q(const IntPoly& f, const FactorOptions& opts = {}) {
    IrreducibilityCertificate cert;
    if (f.degree() < 1) throw invalid_input("irreducibility requires degree >= 1");
    if (!f.is_primitive()) throw invalid_input("irreducibility requires a primitive polynomial");
    if (f.degree() == 1) {
        cert.verdict = IrreducibilityCertificate::Verdict::degree_one;
        return cert;
    }

    // A repeated factor settles the question without any mod-p work.
    IntPoly g = poly_gcd(f, f.derivative());
    if (g.degree() >= 1) {
        cert.verdict = IrreducibilityCertificate::Verdict::reducible;
        cert.witness_factors = {g, f.divexact_by(g)};
        return cert;
    }

    const BigInt bad = f.leading() * discriminant(f);

    unsigned tried = 0;
    std::uint64_t p = 1;
    std::uint64_t fallback_p = 0;
    while (tried < opts.certificate_primes) {
        BigInt np;
        mpz_nextprime(np.get_mpz_t(), BigInt(static_cast<unsigned long>(p)).get_mpz_t());
        p = np.get_ui();
        if (mpz_divisible_ui_p(bad.get_mpz_t(), p)) continue;
        ++tried;
        if (fallback_p == 0 && p >= 3) fallback_p = p;
        if (fp::is_irreducible(fp::reduce(f, p), p)) {
            cert.verdict = IrreducibilityCertificate::Verdict::irreducible;
            cert.witness_prime = p;
            return cert;
        }
    }

    // Exact fallback: Zassenhaus recombination.
    if (auto lin = detail::rational_root_factor(f)) {
        cert.verdict = IrreducibilityCertificate::Verdict::reducible;
        cert.witness_factors = lin;
        return cert;
    }
    if (fallback_p == 0) {
        std::uint64_t cand = 2;
        for (;;) {
            BigInt np;
            mpz_nextprime(np.get_mpz_t(), BigInt(static_cast<unsigned long>(cand)).get_mpz_t());
            cand = np.get_ui();
            if (cand >= 3 && !mpz_divisible_ui_p(bad.get_mpz_t(), cand)) break;
        }
        fallback_p = cand;
    }

    const std::uint64_t q = fallback_p;
    std::vector<fp::Poly> local = fp::factor_squarefree(fp::reduce(f, q), q, opts.seed);
    if (local.size() == 1) {
        cert.verdict = IrreducibilityCertificate::Verdict::irreducible;
        cert.witness_prime = q;
        return cert;
    }
    std::sort(local.begin(), local.end());

    const BigInt B = landau_mignotte_bound(f);
    unsigned K = 1;
    BigInt M(static_cast<unsigned long>(q));
    while (M <= 2 * B) {
        M *= static_cast<unsigned long>(q);
        ++K;
    }

    // Lift the monic factorization of f/lc(f) mod q^K.
    BigInt lc_inv;
    if (mpz_invert(lc_inv.get_mpz_t(), f.leading().get_mpz_t(), M.get_mpz_t()) == 0)
        throw internal_error("leading coefficient not a unit modulo lift modulus");
    detail::ZmPoly f_monic = detail::zm_from(f, M);
    for (auto& c : f_monic) c = (c * lc_inv) % M;
    auto lifted = detail::hensel_lift_tree(f_monic, local, q, K, M);

    const int d = f.degree();
    const std::size_t n = lifted.size();
    long budget = opts.work_budget;
    std::vector<std::size_t> idx;
    const IntPoly f_abs = sign(f.leading()) < 0 ? -f : f;

    // Subsets by increasing cardinality; a proper factor must use at most
    // half of the local factors.
    for (std::size_t card = 1; 2 * card <= n; ++card) {
        idx.assign(card, 0);
        for (std::size_t i = 0; i < card; ++i) idx[i] = i;
        for (;;) {
            bool skip_complement_dup = (2 * card == n) && idx[0] != 0;
            if (!skip_complement_dup) {
                if (--budget < 0) {
                    cert.verdict = IrreducibilityCertificate::Verdict::unverified;
                    return cert;
                }
                int degsum = 0;
                for (std::size_t i : idx) degsum += static_cast<int>(lifted[i].size()) - 1;
                if (degsum >= 1 && degsum < d) {
                    detail::ZmPoly prod{f_abs.leading() % M};
                    for (std::size_t i : idx) prod = detail::zm_mul(prod, lifted[i], M);
                    IntPoly candidate = detail::zm_symmetric(prod, M).primitive_part();
                    if (candidate.degree() >= 1 && candidate.divides(f_abs)) {
                        IntPoly other = f_abs.divexact_by(candidate);
                        if (sign(f.leading()) < 0) other = -other;
                        cert.verdict = IrreducibilityCertificate::Verdict::reducible;
                        cert.witness_factors = {candidate, other};
                        return cert;
                    }
                }
            }
            // next combination
            std::size_t i = card;
            while (i-- > 0) {
                if (idx[i] != i + n - card) {
                    ++idx[i];
                    for (std::size_t j = i + 1; j < card; ++j) idx[j] = idx[j - 1] + 1;
                    break;
                }
                if (i == 0) goto next_card;
            }
        }
    next_card:;
    }

    cert.verdict = IrreducibilityCertificate::Verdict::irreducible;
    return cert;
}

// Full factorization into primitive irreducible factors (leading signs
// normalized positive except possibly the first).
inline std::vector<IntPoly> factor_completely(const IntPoly& f, const FactorOptions& opts = {}) {
    IntPoly g = f.primitive_part();
    if (g.degree() < 1) return {};
    IrreducibilityCertificate cert = is_irreducible_over_q(g, opts);
    if (cert.certified_irreducible()) return {g};
    if (cert.verdict == IrreducibilityCertificate::Verdict::unverified)
        throw internal_error("factor_completely: irreducibility fallback exceeded budget");
    auto [a, b] = *cert.witness_factors;
    auto out = factor_completely(a, opts);
    auto rest = factor_completely(b, opts);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

} // namespace lehmer
