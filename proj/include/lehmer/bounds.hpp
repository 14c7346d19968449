#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lehmer/bigint.hpp"
#include "lehmer/errors.hpp"
#include "lehmer/factor.hpp"
#include "lehmer/heights.hpp"
#include "lehmer/intpoly.hpp"
#include "lehmer/padic.hpp"
#include "lehmer/resultant.hpp"

namespace lehmer {

// Finite extension of Q_p described by its invariants. Everything computed in
// this artifact has e = 1 (unramified scope); e is kept explicit because the
// bound formulas carry it.
struct LocalFieldDescriptor {
    std::uint64_t p = 2;
    unsigned e = 1;
    unsigned f = 1;

    double q() const { return std::pow(static_cast<double>(p), static_cast<double>(f)); }
    double n() const { return static_cast<double>(e) * static_cast<double>(f); }
};

// Height lower bound from s conjugates lying in one local field K:
//   max{0, s^2/(q+1) - d} * log(p) / (2 e d^2) - log(d)/(2d).
// This is the fully explicit finite-degree form (worst-case constants from
// the proof chain), never an asymptotic form.
inline double single_field_bound(unsigned d, unsigned s, const LocalFieldDescriptor& K) {
    if (d < 1) throw invalid_input("single_field_bound: d >= 1 required");
    if (s > d) throw invalid_input("single_field_bound: s <= d required");
    const double dd = static_cast<double>(d);
    const double q = K.q();
    double first = std::max(0.0, static_cast<double>(s) * s / (q + 1.0) - dd);
    first *= std::log(static_cast<double>(K.p)) / (2.0 * K.e * dd * dd);
    return first - std::log(dd) / (2.0 * dd);
}

// Conjugate-count threshold above which h >= c/d is guaranteed:
//   sqrt( (2 (q+1) n d / log q) (c + log(q d)/2) ).
struct ThresholdResult {
    double threshold = 0.0;
    unsigned long required_count = 0; // ceil(threshold)
    bool feasible = false;            // threshold <= d
};

inline ThresholdResult guarantee_threshold(unsigned d, const LocalFieldDescriptor& K, double c) {
    if (c <= 0.0) throw invalid_input("guarantee_threshold: c > 0 required");
    if (d < 1) throw invalid_input("guarantee_threshold: d >= 1 required");
    const double q = K.q();
    const double dd = static_cast<double>(d);
    double thr = std::sqrt((2.0 * (q + 1.0) * K.n() * dd / std::log(q)) *
                           (c + std::log(q * dd) / 2.0));
    ThresholdResult r;
    r.threshold = thr;
    r.required_count = static_cast<unsigned long>(std::ceil(thr));
    r.feasible = thr <= dd;
    return r;
}

// Membership test for the sqrt(q^3 n d log d) criterion, with the guaranteed
// unbounded growth of d*h for members.
struct GrowthCriterion {
    double threshold = 0.0;
    unsigned long required_count = 0;
    bool feasible = false;
    bool member = false;
    double guaranteed_growth = 0.0; // lower bound on d*h when member
};

inline GrowthCriterion growth_criterion(unsigned d, const LocalFieldDescriptor& K, unsigned s) {
    if (d < 2) throw invalid_input("growth_criterion: d >= 2 required");
    const double q = K.q();
    const double dd = static_cast<double>(d);
    GrowthCriterion r;
    r.threshold = std::sqrt(q * q * q * K.n() * dd * std::log(dd));
    r.required_count = static_cast<unsigned long>(std::ceil(r.threshold));
    r.feasible = r.threshold <= dd;
    r.member = static_cast<double>(s) >= r.threshold;
    // (q^3 log q - q - 1)/(2(q+1)) >= 2/5 for q >= 2; O-term constant <= 1/2
    r.guaranteed_growth = 0.4 * std::log(dd) - 0.5 * std::log(q) / K.n();
    return r;
}

namespace detail {

// Detected unramified part of one prime: exact-generator counts per level.
struct UnramifiedSummary {
    double sum_eq = 0.0;    // sum over fields of e_K q_K
    double sum_se = 0.0;    // sum over fields of s_K / e_K
    double accounted = 0.0; // sum of s_K
};

inline UnramifiedSummary summarize(const LocalProfile& prof) {
    UnramifiedSummary s;
    for (const auto& [level, count] : prof.exact_generator_counts) {
        if (count == 0) continue;
        s.sum_eq += std::pow(static_cast<double>(prof.p), static_cast<double>(level));
        s.sum_se += static_cast<double>(count);
        s.accounted += static_cast<double>(count);
    }
    return s;
}

} // namespace detail

// Multi-prime bound for algebraic integers (exact-generator semantics):
//   (1/2) sum_p max{0, m_p^2/(sum_K e_K q_K) - sum_K s_K/e_K} (log p)/d^2
//     - log(d)/(2d),
// where m_p counts the conjugates accounted for by the detected unramified
// fields at p. With nothing dropped m_p = d and this is the textbook form;
// with ramified conjugates dropped the m_p^2 numerator keeps the bound sound
// (the Cauchy-Schwarz step only sees the detected fields).
inline double multi_field_bound(const IntPoly& f, const std::vector<LocalProfile>& profiles) {
    if (!f.is_monic()) throw invalid_input("multi_field_bound: monic input required");
    const unsigned d = static_cast<unsigned>(f.degree());
    const double dd = static_cast<double>(d);
    double total = 0.0;
    for (const auto& prof : profiles) {
        auto s = detail::summarize(prof);
        if (s.accounted == 0.0) continue;
        double term = std::max(0.0, (s.accounted * s.accounted / s.sum_eq - s.sum_se) / (dd * dd));
        total += 0.5 * term * std::log(static_cast<double>(prof.p));
    }
    return total - std::log(dd) / (2.0 * dd);
}

// Per-field Cauchy-Schwarz form:
//   (1/2) sum_p max{0, (1/d^2) sum_K (s_K^2/q_K - s_K) (log q_K)/n_K}
//     - log(d)/(2d).
inline double fieldwise_bound(const IntPoly& f, const std::vector<LocalProfile>& profiles) {
    if (!f.is_monic()) throw invalid_input("fieldwise_bound: monic input required");
    const double dd = static_cast<double>(f.degree());
    double total = 0.0;
    for (const auto& prof : profiles) {
        double inner = 0.0;
        for (const auto& [level, count] : prof.exact_generator_counts) {
            if (count == 0) continue;
            double q = std::pow(static_cast<double>(prof.p), static_cast<double>(level));
            double s = static_cast<double>(count);
            inner += (s * s / q - s) * std::log(q) / static_cast<double>(level);
        }
        total += 0.5 * std::max(0.0, inner / (dd * dd));
    }
    return total - std::log(dd) / (2.0 * dd);
}

// Sharpest bound computable from the collected residue data: skips every
// Cauchy-Schwarz weakening and uses the collision sums directly:
//   (1/(2 d^2)) sum_p sum_K sum_x N_{K,x}(N_{K,x}-1) (log p)/e_K - log(d)/(2d).
inline double exact_collision_bound(const IntPoly& f, const std::vector<LocalProfile>& profiles) {
    if (!f.is_monic()) throw invalid_input("exact_collision_bound: monic input required");
    const double dd = static_cast<double>(f.degree());
    double total = 0.0;
    for (const auto& prof : profiles) {
        double collisions = 0.0;
        for (const auto& [level, hist] : prof.exact_generator_histograms)
            for (const auto& [res, n] : hist)
                collisions += static_cast<double>(n) * (static_cast<double>(n) - 1.0);
        total += collisions * std::log(static_cast<double>(prof.p));
    }
    return total / (2.0 * dd * dd) - std::log(dd) / (2.0 * dd);
}

// The displayed valuation inequality, both sides exact integers:
//   ord_p(D) >= (|S_K|-r')(|S_K|-r'-1) + sum_x N_x(N_x-1)   (e = 1).
struct ValuationMargin {
    std::uint64_t p = 0;
    unsigned level = 1;
    unsigned long ord_disc = 0;
    long rhs = 0;
    long margin = 0; // ord_disc - rhs, expected >= 0
};

inline ValuationMargin valuation_inequality_check(const UnramifiedLevelStats& stats,
                                                  unsigned long ord_disc, std::uint64_t p) {
    ValuationMargin m;
    m.p = p;
    m.level = stats.level;
    m.ord_disc = ord_disc;
    long nonint = static_cast<long>(stats.nonintegral_count);
    long rhs = nonint * (nonint - 1);
    for (const auto& [res, n] : stats.residue_histogram)
        rhs += static_cast<long>(n) * (static_cast<long>(n) - 1);
    m.rhs = rhs;
    m.margin = static_cast<long>(ord_disc) - rhs;
    return m;
}

inline ValuationMargin valuation_inequality_check(const IntPoly& f, std::uint64_t p, unsigned level,
                                                  std::uint64_t seed = 0) {
    auto stats = count_roots_unramified(f, p, level, seed);
    unsigned long ord = padic_valuation(discriminant(f), BigInt(static_cast<unsigned long>(p)));
    return valuation_inequality_check(stats, ord, p);
}

// |D| <= d^d M^{2d-2}, reported as the log-margin
//   d log d + (2d-2) log M - log|D| >= 0.
// Numeric near-ties fall back to an exact integer comparison when M = 1
// (detected exactly through the factorization); d = 1 is the equality edge.
struct MahlerMargin {
    double margin = 0.0;
    bool holds = false;
    bool exact_boundary = false; // settled by exact integer comparison
};

// True iff M(f) = 1: |lc| = 1 and every irreducible factor is cyclotomic.
inline bool is_mahler_one(const IntPoly& f, const FactorOptions& fopts = {}) {
    IntPoly g = f.primitive_part();
    if (g.degree() < 1) return false;
    if (abs(g.leading()) != 1) return false;
    for (const auto& factor : factor_completely(g, fopts))
        if (!is_torsion(factor)) return false;
    return true;
}

inline MahlerMargin mahler_inequality_check(const IntPoly& f_in,
                                            const std::optional<HeightEstimate>& precomputed = std::nullopt) {
    IntPoly f = f_in.primitive_part();
    const int d = f.degree();
    if (d < 1) throw invalid_input("mahler_inequality_check: degree >= 1 required");

    MahlerMargin out;
    BigInt D = discriminant(f);
    if (sign(D) == 0) { // |D| = 0: the inequality is vacuously true
        out.margin = std::numeric_limits<double>::infinity();
        out.holds = true;
        return out;
    }
    if (d == 1) { // |D| = 1 = d^d M^0: exact equality edge
        out.margin = 0.0;
        out.holds = true;
        out.exact_boundary = true;
        return out;
    }

    const double dd = static_cast<double>(d);
    double tol = 1e-9;
    for (int attempt = 0; attempt < 3; ++attempt) {
        HeightOptions hopts;
        hopts.tolerance = tol;
        HeightEstimate est =
            (attempt == 0 && precomputed) ? *precomputed : mahler_height(f, hopts);

        const mpfr_prec_t prec = 192;
        const BigInt absD = abs(D);
        BigFloat logD_hi = bf::log(BigFloat::of(absD, prec), MPFR_RNDU);
        BigFloat logD_lo = bf::log(BigFloat::of(absD, prec), MPFR_RNDD);
        BigFloat dlogd_lo = bf::mul_ui(bf::log(BigFloat::of(static_cast<long>(d), prec), MPFR_RNDD),
                                       static_cast<unsigned long>(d), MPFR_RNDD);
        BigFloat dlogd_hi = bf::mul_ui(bf::log(BigFloat::of(static_cast<long>(d), prec), MPFR_RNDU),
                                       static_cast<unsigned long>(d), MPFR_RNDU);
        BigFloat logM_lo = bf::log(est.mahler_lo, MPFR_RNDD);
        BigFloat logM_hi = bf::log(est.mahler_hi, MPFR_RNDU);
        BigFloat mar_lo = bf::sub(
            bf::add(dlogd_lo, bf::mul_ui(logM_lo, static_cast<unsigned long>(2 * d - 2), MPFR_RNDD),
                    MPFR_RNDD),
            logD_hi, MPFR_RNDD);
        BigFloat mar_hi = bf::sub(
            bf::add(dlogd_hi, bf::mul_ui(logM_hi, static_cast<unsigned long>(2 * d - 2), MPFR_RNDU),
                    MPFR_RNDU),
            logD_lo, MPFR_RNDU);

        out.margin = 0.5 * (mar_lo.to_double() + mar_hi.to_double());
        if (mar_lo.sgn() >= 0) {
            out.holds = true;
            return out;
        }
        if (mar_hi.sgn() < 0) {
            out.holds = false; // genuine violation (never expected)
            return out;
        }
        // Straddles zero: the only mathematical ties have M = 1.
        if (is_mahler_one(f)) {
            BigInt dpow = pow_ui(BigInt(static_cast<long>(d)), static_cast<unsigned long>(d));
            out.holds = abs(D) <= dpow;
            out.exact_boundary = true;
            out.margin = abs(D) == dpow ? 0.0 : bf::sub(dlogd_lo, logD_hi).to_double();
            return out;
        }
        tol = tol * tol;
    }
    throw precision_exhausted("mahler_inequality_check: margin sign unresolved");
}

// Constants used as cross-check oracles.
inline double pottmeyer_constant(std::uint64_t p) {
    return std::log(static_cast<double>(p) / 2.0) / (static_cast<double>(p) + 1.0);
}
// Totally p-adic form of the multi-prime bound.
inline double totally_padic_bound(std::uint64_t p, unsigned d) {
    const double dd = static_cast<double>(d), pp = static_cast<double>(p);
    return std::log(pp) / (2.0 * pp) * std::max(0.0, 1.0 - pp / dd) - std::log(dd) / (2.0 * dd);
}
// Bombieri-Zannier liminf reference constant for fields with residue size q.
inline double bz_reference_constant(std::uint64_t p, unsigned e, unsigned f) {
    double q = std::pow(static_cast<double>(p), static_cast<double>(f));
    return std::log(static_cast<double>(p)) / (2.0 * e * (q + 1.0));
}

} // namespace lehmer
