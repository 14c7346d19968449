#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "lehmer/bigint.hpp"
#include "lehmer/errors.hpp"
#include "lehmer/fq.hpp"
#include "lehmer/intpoly.hpp"
#include "lehmer/newton.hpp"
#include "lehmer/resultant.hpp"

namespace lehmer {

// Exact element of the unramified ring Z[t]/(M(t)), M the integer lift of the
// residue field modulus. No modulus-p^k truncation anywhere: coefficients are
// plain integers, so the Hensel recursion below cannot lose precision.
// Valuation of a nonzero element is the min over coefficient valuations,
// which is valid precisely because the extension is unramified with integral
// basis 1, t, ..., t^{f-1}.
struct OkElem {
    std::vector<BigInt> c; // length = field degree f

    bool is_zero() const {
        for (const auto& v : c)
            if (sign(v) != 0) return false;
        return true;
    }
};

namespace ok_ops {

inline OkElem zero(const FqField& k) { return OkElem{std::vector<BigInt>(k.f, BigInt(0))}; }

inline OkElem lift(const FqField& k, const FqElem& e) {
    OkElem r = zero(k);
    for (unsigned i = 0; i < k.f; ++i) r.c[i] = BigInt(static_cast<unsigned long>(e.c[i]));
    return r;
}

inline OkElem from_int(const FqField& k, const BigInt& v) {
    OkElem r = zero(k);
    r.c[0] = v;
    return r;
}

inline OkElem add(const FqField& k, const OkElem& a, const OkElem& b) {
    OkElem r = a;
    for (unsigned i = 0; i < k.f; ++i) r.c[i] += b.c[i];
    return r;
}

inline OkElem mul_scalar(const FqField&, const OkElem& a, const BigInt& s) {
    OkElem r = a;
    for (auto& v : r.c) v *= s;
    return r;
}

inline OkElem mul(const FqField& k, const OkElem& a, const OkElem& b) {
    const unsigned f = k.f;
    std::vector<BigInt> prod(2 * f - 1, BigInt(0));
    for (unsigned i = 0; i < f; ++i) {
        if (sign(a.c[i]) == 0) continue;
        for (unsigned j = 0; j < f; ++j) prod[i + j] += a.c[i] * b.c[j];
    }
    // reduce by the monic modulus lift
    const IntPoly& M = k.modulus_lift;
    for (unsigned i = 2 * f - 2; i >= f && i < prod.size(); --i) {
        if (sign(prod[i]) == 0) continue;
        BigInt top = prod[i];
        prod[i] = 0;
        for (unsigned j = 0; j < f; ++j) prod[i - f + j] -= top * M[j];
    }
    prod.resize(f);
    return OkElem{std::move(prod)};
}

inline FqElem reduce_mod_p(const FqField& k, const OkElem& a) {
    FqElem e{};
    BigInt p(static_cast<unsigned long>(k.p));
    for (unsigned i = 0; i < k.f; ++i) {
        BigInt m = a.c[i] % p;
        if (sign(m) < 0) m += p;
        e.c[i] = m.get_ui();
    }
    return e;
}

inline unsigned long min_valuation(const OkElem& a, const BigInt& p) {
    bool first = true;
    unsigned long best = 0;
    for (const auto& v : a.c) {
        if (sign(v) == 0) continue;
        unsigned long ord = padic_valuation(v, p);
        best = first ? ord : std::min(best, ord);
        first = false;
    }
    if (first) throw internal_error("min_valuation of zero element");
    return best;
}

inline OkElem divexact_p_power(const OkElem& a, const BigInt& p, unsigned long s) {
    if (s == 0) return a;
    BigInt ps = pow_ui(p, s);
    OkElem r = a;
    for (auto& v : r.c) v = divexact(v, ps);
    return r;
}

} // namespace ok_ops

// Per-level statistics of roots of f in the unramified extension of degree f'.
// membership = |S_K(alpha)| in membership semantics; histogram covers the
// integral roots only and is keyed by their residue in F_q.
struct UnramifiedLevelStats {
    unsigned level = 0;
    std::shared_ptr<const FqField> field;
    unsigned membership_count = 0;
    unsigned integral_count = 0;    // r'
    unsigned nonintegral_count = 0; // |S_K| - r'
    std::map<FqElem, unsigned> residue_histogram;
    unsigned max_recursion_depth = 0; // diagnostic: termination certificate
};

namespace detail {

using OkPoly = std::vector<OkElem>; // ascending; trailing zero elems allowed until trim

inline void ok_trim(const FqField&, OkPoly& F) {
    while (!F.empty() && F.back().is_zero()) F.pop_back();
}

inline OkPoly ok_embed(const FqField& k, const IntPoly& f) {
    OkPoly F;
    F.reserve(f.coeffs().size());
    for (const auto& a : f.coeffs()) F.push_back(ok_ops::from_int(k, a));
    return F;
}

// F(rho + p*y) via synthetic Taylor expansion, exact.
inline OkPoly ok_shift(const FqField& k, const OkPoly& F, const OkElem& rho, const BigInt& p) {
    OkPoly c = F;
    const std::size_t n = c.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = n - 1; j-- > i;)
            c[j] = ok_ops::add(k, c[j], ok_ops::mul(k, rho, c[j + 1]));
    BigInt pk(1);
    for (std::size_t t = 0; t < n; ++t) {
        c[t] = ok_ops::mul_scalar(k, c[t], pk);
        pk *= p;
    }
    return c;
}

// Divide out the largest common power of p; returns the exponent removed.
inline unsigned long ok_normalize(const FqField&, OkPoly& F, const BigInt& p) {
    bool first = true;
    unsigned long s = 0;
    for (const auto& e : F) {
        if (e.is_zero()) continue;
        unsigned long v = ok_ops::min_valuation(e, p);
        s = first ? v : std::min(s, v);
        first = false;
        if (s == 0) break;
    }
    if (first) throw internal_error("ok_normalize: zero polynomial");
    if (s > 0)
        for (auto& e : F) e = ok_ops::divexact_p_power(e, p, s);
    return s;
}

inline FqPoly ok_reduce(const FqField& k, const OkPoly& F) {
    FqPoly r;
    r.c.reserve(F.size());
    for (const auto& e : F) r.c.push_back(ok_ops::reduce_mod_p(k, e));
    fq_ops::trim(r);
    return r;
}

// Recursive Hensel branch counter. Simple residue roots lift uniquely;
// degenerate residues recurse through an exact shift x -> rho + p*y. The
// recursion depth is certified against the disc-valuation budget: exceeding
// it means an arithmetic bug, not bad input.
struct HenselCounter {
    const FqField& k;
    BigInt p;
    unsigned budget;
    std::uint64_t seed;
    unsigned max_depth = 0;

    unsigned count(OkPoly F, unsigned depth, const std::optional<FqElem>& only_residue,
                   std::map<FqElem, unsigned>* histogram, std::optional<FqElem> top_residue) {
        ok_normalize(k, F, p);
        FqPoly Fbar = ok_reduce(k, F);
        if (Fbar.is_zero()) throw internal_error("reduction vanished after normalization");
        if (Fbar.degree() < 1) return 0;

        FqPoly Fbar_deriv = fq_ops::deriv(k, Fbar);
        unsigned total = 0;
        for (const FqElem& r : fq_roots(Fbar, k, mix_seed(seed, depth))) {
            if (only_residue && !(r == *only_residue)) continue;
            const FqElem& top = top_residue ? *top_residue : r;
            bool simple = !Fbar_deriv.is_zero() && !fq_ops::eval(k, Fbar_deriv, r).is_zero();
            if (simple) {
                ++total;
                if (histogram) ++(*histogram)[top];
            } else {
                if (depth + 1 > budget)
                    throw internal_error("Hensel recursion exceeded disc-valuation budget");
                max_depth = std::max(max_depth, depth + 1);
                OkPoly G = ok_shift(k, F, ok_ops::lift(k, r), p);
                total += count(std::move(G), depth + 1, std::nullopt, histogram, top);
            }
        }
        return total;
    }
};

} // namespace detail

namespace detail {

inline UnramifiedLevelStats count_roots_impl(const IntPoly& f, const IntPoly& rev,
                                             unsigned ord_disc, unsigned ord_disc_rev,
                                             std::uint64_t p, unsigned level, std::uint64_t seed) {
    UnramifiedLevelStats stats;
    stats.level = level;
    stats.field = fq_construct(p, level);
    const FqField& k = *stats.field;
    const BigInt bp(static_cast<unsigned long>(p));

    {
        HenselCounter counter{k, bp, ord_disc + 1, mix_seed(seed, f.hash()), 0};
        stats.integral_count = counter.count(ok_embed(k, f), 0, std::nullopt,
                                             &stats.residue_histogram, std::nullopt);
        stats.max_recursion_depth = counter.max_depth;
    }
    {
        HenselCounter counter{k, bp, ord_disc_rev + 1, mix_seed(seed ^ 0xa5a5a5a5ULL, f.hash()), 0};
        stats.nonintegral_count = counter.count(ok_embed(k, rev), 0,
                                                std::make_optional(fq_ops::zero(k)), nullptr,
                                                std::nullopt);
        stats.max_recursion_depth = std::max(stats.max_recursion_depth, counter.max_depth);
    }
    stats.membership_count = stats.integral_count + stats.nonintegral_count;

    unsigned hist_total = 0;
    for (const auto& [res, n] : stats.residue_histogram) hist_total += n;
    if (hist_total != stats.integral_count)
        throw internal_error("residue histogram does not sum to the integral count");
    if (stats.membership_count > static_cast<unsigned>(f.degree()))
        throw internal_error("membership count exceeds the degree");
    return stats;
}

} // namespace detail

// Exact root counts of a squarefree integer polynomial in the unramified
// extension of Q_p of degree `level`, with residue tracking. Integral roots
// come from the Hensel recursion; nonintegral ones from the residue-zero
// branch of the reversed polynomial.
inline UnramifiedLevelStats count_roots_unramified(const IntPoly& f, std::uint64_t p, unsigned level,
                                                   std::uint64_t seed = 0) {
    if (f.degree() < 1) throw invalid_input("count_roots_unramified: degree >= 1 required");
    if (sign(f.constant_term()) == 0)
        throw invalid_input("count_roots_unramified: a_0 = 0 (zero root)");
    BigInt D = discriminant(f);
    if (sign(D) == 0) throw invalid_input("count_roots_unramified: input must be squarefree");

    const BigInt bp(static_cast<unsigned long>(p));
    IntPoly rev = f.reversed();
    UnramifiedLevelStats stats = detail::count_roots_impl(
        f, rev, static_cast<unsigned>(padic_valuation(D, bp)),
        static_cast<unsigned>(padic_valuation(discriminant(rev), bp)), p, level, seed);
    return stats;
}

// Per-prime local analysis: polygon, per-level membership statistics, and the
// exact-generator partition of conjugates by the unramified subfield they
// generate. Ramified conjugates are never analyzed, only counted and flagged.
struct LocalProfile {
    std::uint64_t p = 0;
    NewtonPolygon polygon;
    std::vector<UnramifiedLevelStats> levels; // levels[i] is level i+1
    std::map<unsigned, unsigned> exact_generator_counts;
    std::map<unsigned, std::map<FqElem, unsigned>> exact_generator_histograms;
    unsigned unaccounted_count = 0;
    bool ramified_or_deep = false;
    unsigned long ord_p_disc = 0;

    const UnramifiedLevelStats& level(unsigned f_prime) const {
        if (f_prime < 1 || f_prime > levels.size())
            throw invalid_input("level out of range");
        return levels[f_prime - 1];
    }
};

namespace detail {

inline bool level_supported(unsigned f_prime) {
    if (f_prime == 1) return true;
    // prime levels only: every proper subfield is then the prime field, whose
    // embedding is canonical, so generator histograms are well-defined.
    for (unsigned q = 2; q * q <= f_prime; ++q)
        if (f_prime % q == 0) return false;
    return true;
}

} // namespace detail

// Moebius-style inclusion-exclusion of membership counts over the divisor
// lattice, plus pointwise histogram subtraction of the embedded prime field.
// Composite levels would need a compatible tower of embeddings and are
// rejected as unsupported.
inline void subfield_partition(const std::vector<UnramifiedLevelStats>& levels,
                               std::map<unsigned, unsigned>& gen_counts,
                               std::map<unsigned, std::map<FqElem, unsigned>>& gen_histograms) {
    gen_counts.clear();
    gen_histograms.clear();
    for (const auto& st : levels) {
        if (!detail::level_supported(st.level))
            throw unsupported_level("composite level " + std::to_string(st.level) +
                                    " is beyond the compatible-tower support");
        if (st.level == 1) {
            gen_counts[1] = st.membership_count;
            gen_histograms[1] = st.residue_histogram;
            continue;
        }
        const UnramifiedLevelStats* level1 = nullptr;
        for (const auto& other : levels)
            if (other.level == 1) level1 = &other;
        if (!level1) throw internal_error("level 1 statistics missing");

        if (st.membership_count < level1->membership_count)
            throw internal_error("membership not monotone across subfields");
        gen_counts[st.level] = st.membership_count - level1->membership_count;

        std::map<FqElem, unsigned> hist = st.residue_histogram;
        for (const auto& [res, n] : level1->residue_histogram) {
            FqElem embedded = fq_ops::from_scalar(*st.field, res.c[0]);
            auto it = hist.find(embedded);
            if (it == hist.end() || it->second < n)
                throw internal_error("level-1 residues not contained in deeper histogram");
            it->second -= n;
            if (it->second == 0) hist.erase(it);
        }
        gen_histograms[st.level] = std::move(hist);
    }
}

inline LocalProfile local_profile(const IntPoly& f, std::uint64_t p, unsigned f_max = 3,
                                  std::uint64_t seed = 0) {
    if (f.degree() < 1) throw invalid_input("local_profile: degree >= 1 required");
    if (sign(f.constant_term()) == 0) throw invalid_input("local_profile: a_0 = 0 (zero root)");
    if (f_max < 1) throw invalid_input("local_profile: f_max >= 1 required");
    for (unsigned lvl = 1; lvl <= f_max; ++lvl)
        if (!detail::level_supported(lvl))
            throw unsupported_level("composite level " + std::to_string(lvl) +
                                    " is beyond the compatible-tower support");
    BigInt D = discriminant(f);
    if (sign(D) == 0) throw invalid_input("local_profile: input must be squarefree");

    LocalProfile prof;
    prof.p = p;
    prof.polygon = newton_polygon(f, p);
    const BigInt bp(static_cast<unsigned long>(p));
    prof.ord_p_disc = padic_valuation(D, bp);
    IntPoly rev = f.reversed();
    const unsigned ord_rev = static_cast<unsigned>(padic_valuation(discriminant(rev), bp));
    for (unsigned lvl = 1; lvl <= f_max; ++lvl)
        prof.levels.push_back(detail::count_roots_impl(f, rev, static_cast<unsigned>(prof.ord_p_disc),
                                                       ord_rev, p, lvl, seed));
    subfield_partition(prof.levels, prof.exact_generator_counts, prof.exact_generator_histograms);

    unsigned accounted = 0;
    for (const auto& [lvl, n] : prof.exact_generator_counts) accounted += n;
    if (accounted > static_cast<unsigned>(f.degree()))
        throw internal_error("partition exceeds the degree");
    prof.unaccounted_count = static_cast<unsigned>(f.degree()) - accounted;
    prof.ramified_or_deep = prof.unaccounted_count > 0 || prof.polygon.has_fractional_slope();
    return prof;
}

} // namespace lehmer
