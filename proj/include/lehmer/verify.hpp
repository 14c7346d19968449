#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "lehmer/bounds.hpp"
#include "lehmer/heights.hpp"
#include "lehmer/padic.hpp"
#include "lehmer/reference.hpp"
#include "lehmer/report.hpp"
#include "lehmer/sectors.hpp"

namespace lehmer {

// Outcome of one property suite: counts, the worst margin seen (suite-specific
// meaning, >= 0 is healthy), and a note per violation (capped).
struct SuiteResult {
    std::string name;
    long checks = 0;
    long violations = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::vector<std::string> notes;

    bool passed() const { return violations == 0; }
    void fail(const std::string& what) {
        ++violations;
        if (notes.size() < 10) notes.push_back(what);
    }
    void margin(double m) { worst_margin = std::min(worst_margin, m); }
};

namespace verify_detail {

template <typename F>
void enumerate(int degree, long bound, bool monic, F&& fn) {
    std::vector<long> c(static_cast<std::size_t>(degree) + 1, -bound);
    for (;;) {
        bool lead_ok = monic ? c.back() == 1 : c.back() > 0;
        if (lead_ok && c.front() != 0) {
            std::vector<BigInt> coeffs(c.begin(), c.end());
            IntPoly f(std::move(coeffs));
            if (f.is_primitive()) fn(f);
        }
        std::size_t i = 0;
        while (i < c.size() && c[i] == bound) c[i++] = -bound;
        if (i == c.size()) break;
        ++c[i];
    }
}

inline IntPoly random_squarefree(SplitMix64& rng, int max_deg, long bound) {
    for (;;) {
        int d = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_deg - 1)));
        std::vector<BigInt> c(static_cast<std::size_t>(d) + 1);
        for (auto& v : c) v = static_cast<long>(rng.below(2 * bound + 1)) - bound;
        IntPoly f(std::move(c));
        if (f.degree() < 2 || sign(f.constant_term()) == 0) continue;
        if (sign(discriminant(f)) == 0) continue;
        return f;
    }
}

} // namespace verify_detail

// Height identities, reversal invariance, the Kronecker equivalence on a
// desk-size corpus, and the error-bound honesty check.
inline SuiteResult verify_heights(std::uint64_t seed = 0) {
    SuiteResult res;
    res.name = "heights";

    for (unsigned d = 1; d <= 20; ++d) {
        std::vector<BigInt> c(d + 1, BigInt(0));
        c[0] = -2;
        c[d] = 1;
        auto est = mahler_height(IntPoly(std::move(c)));
        double err = std::fabs(est.height() - std::log(2.0) / d);
        res.margin(1e-9 - err);
        ++res.checks;
        if (err > 1e-9) res.fail("height of degree-" + std::to_string(d) + " radical off by " + std::to_string(err));
    }

    verify_detail::enumerate(3, 2, false, [&](const IntPoly& f) {
        if (sign(discriminant(f)) == 0) return;
        auto a = mahler_height(f);
        auto b = mahler_height(f.reversed());
        double err = std::fabs(a.height() - b.height());
        res.margin(1e-9 - err);
        ++res.checks;
        if (err > 1e-9) res.fail("reversal invariance broken at " + f.to_string());
    });

    for (int d = 1; d <= 4; ++d)
        verify_detail::enumerate(d, 2, true, [&](const IntPoly& f) {
            if (!is_irreducible_over_q(f).certified_irreducible()) return;
            auto est = mahler_height(f);
            bool zero_h = std::fabs(est.height()) <= 1e-9;
            ++res.checks;
            if (zero_h != is_torsion(f)) res.fail("Kronecker equivalence broken at " + f.to_string());
        });

    SplitMix64 rng(mix_seed(seed, 0x4e1));
    for (int i = 0; i < 50; ++i) {
        IntPoly f = verify_detail::random_squarefree(rng, 6, 5);
        HeightOptions loose, tight;
        loose.tolerance = 1e-10;
        tight.tolerance = 1e-20;
        auto a = mahler_height(f, loose);
        auto b = mahler_height(f, tight);
        ++res.checks;
        if (std::fabs(a.mahler() - b.mahler()) > a.mahler_error() + 1e-15)
            res.fail("error bound dishonest at " + f.to_string());
    }
    return res;
}

// Planted-root and naive-lifting oracles plus the structural p-adic
// invariants (polygon mass, partition consistency, monotonicity, recursion
// depth certificate).
inline SuiteResult verify_padic(std::uint64_t seed = 0, unsigned planted_per_prime = 70,
                                unsigned lifted_per_prime = 100) {
    SuiteResult res;
    res.name = "padic";

    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
        SplitMix64 rng(mix_seed(seed, 0x9a0 + p));
        for (unsigned i = 0; i < planted_per_prime; ++i) {
            auto inst = reference::make_planted_instance(p, rng);
            auto st = count_roots_unramified(inst.poly, p, 1, seed);
            ++res.checks;
            bool ok = st.integral_count == inst.expected_integral;
            for (const auto& [r, n] : inst.expected_residues) {
                unsigned got = 0;
                for (const auto& [res_elem, cnt] : st.residue_histogram)
                    if (res_elem.encode(*st.field) == r) got = cnt;
                ok &= got == n;
            }
            if (!ok) res.fail("planted instance mismatch at " + inst.poly.to_string());
        }

        SplitMix64 rng2(mix_seed(seed, 0xabc + p));
        for (unsigned i = 0; i < lifted_per_prime; ++i) {
            IntPoly f = verify_detail::random_squarefree(rng2, 5, 6);
            auto st = count_roots_unramified(f, p, 1, seed);
            auto tree = reference::zp_branch_tree_count(f, p);
            ++res.checks;
            if (st.integral_count != tree.total)
                res.fail("branch-tree mismatch at " + f.to_string() + " p=" + std::to_string(p));
        }
    }

    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
        verify_detail::enumerate(3, 2, false, [&](const IntPoly& f) {
            auto np = newton_polygon(f, p);
            ++res.checks;
            if (np.total_length() != static_cast<unsigned>(f.degree()))
                res.fail("polygon mass defect at " + f.to_string());
        });
    }

    for (std::uint64_t p : {2ull, 3ull}) {
        verify_detail::enumerate(3, 2, false, [&](const IntPoly& f) {
            if (sign(discriminant(f)) == 0) return;
            auto prof = local_profile(f, p, 3, seed);
            unsigned total = 0;
            for (const auto& [lvl, n] : prof.exact_generator_counts) total += n;
            ++res.checks;
            if (total + prof.unaccounted_count != static_cast<unsigned>(f.degree()))
                res.fail("partition defect at " + f.to_string());
            if (prof.level(1).membership_count > prof.level(2).membership_count ||
                prof.level(1).membership_count > prof.level(3).membership_count)
                res.fail("membership not monotone at " + f.to_string());
            for (const auto& st : prof.levels) {
                res.margin(static_cast<double>(prof.ord_p_disc + 1) -
                           static_cast<double>(st.max_recursion_depth));
                if (st.max_recursion_depth > prof.ord_p_disc + 1)
                    res.fail("recursion depth certificate broken at " + f.to_string());
            }
        });
    }
    return res;
}

// Bound safety, dominance, threshold guarantees, and the totally-p-adic
// cross-checks on a desk-size corpus.
inline SuiteResult verify_bounds(std::uint64_t seed = 0) {
    SuiteResult res;
    res.name = "bounds";
    AnalyzeOptions opts;
    opts.primes = {2, 3, 5};
    opts.seed = seed;

    for (int d = 2; d <= 3; ++d)
        verify_detail::enumerate(d, 2, false, [&](const IntPoly& f) {
            auto rep = analyze(f, opts);
            ++res.checks;
            if (!rep.mahler_margin.holds) res.fail("mahler inequality violated at " + f.to_string());
            res.margin(rep.mahler_margin.margin);
            for (const auto& m : rep.valuation_margins) {
                if (m.margin < 0) res.fail("valuation inequality violated at " + f.to_string());
            }
            if (rep.vacuous) return;
            if (!rep.safety_ok) res.fail("bound exceeded height at " + f.to_string());
            res.margin(rep.worst_gap);
            if (rep.monic) {
                double dom = exact_collision_bound(rep.poly, rep.profiles) -
                             fieldwise_bound(rep.poly, rep.profiles);
                if (dom < -1e-12) res.fail("dominance broken at " + f.to_string());
            }

            // Guarantee-threshold soundness: any (p, level) membership beyond
            // the threshold must deliver h >= c/d.
            const double c = std::log(2.0);
            for (const auto& e : rep.single_field) {
                auto thr = guarantee_threshold(rep.degree, {e.p, 1, e.level}, c);
                if (static_cast<double>(e.membership) >= thr.threshold) {
                    ++res.checks;
                    if (rep.h() + 1e-9 < c / rep.degree)
                        res.fail("guarantee threshold unsound at " + f.to_string());
                }
            }

            // Totally split over Q_p: closed-form and Pottmeyer cross-checks.
            if (rep.monic)
                for (const auto& prof : rep.profiles) {
                    if (prof.level(1).membership_count != rep.degree) continue;
                    ++res.checks;
                    if (rep.h() + 1e-9 < totally_padic_bound(prof.p, rep.degree))
                        res.fail("totally p-adic closed form violated at " + f.to_string());
                    if (rep.h() + 1e-9 < pottmeyer_constant(prof.p))
                        res.fail("Pottmeyer constant violated at " + f.to_string());
                }
        });

    for (std::uint64_t p : {2ull, 3ull, 5ull})
        for (unsigned fdeg = 1; fdeg <= 3; ++fdeg)
            for (unsigned d : {5u, 20u, 80u}) {
                double prev = -1e300;
                for (unsigned s = 0; s <= d; ++s) {
                    double b = single_field_bound(d, s, {p, 1, fdeg});
                    ++res.checks;
                    if (b < prev - 1e-15) res.fail("single-field bound not monotone in s");
                    prev = b;
                }
            }
    return res;
}

// Sector-grid equidistribution on a desk-size irreducible corpus.
inline SuiteResult verify_mignotte(std::uint64_t seed = 0) {
    (void)seed;
    SuiteResult res;
    res.name = "mignotte";
    for (int d = 2; d <= 4; ++d)
        verify_detail::enumerate(d, 1, false, [&](const IntPoly& f) {
            if (!is_irreducible_over_q(f).certified_irreducible()) return;
            auto rep = mignotte_check(f, 16, 8);
            ++res.checks;
            res.margin(rep.worst_margin);
            if (rep.violations > 0) res.fail("sector bound violated at " + f.to_string());
        });
    IntPoly lehmer_poly({1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1});
    auto rep = mignotte_check(lehmer_poly, 64, 16);
    ++res.checks;
    res.margin(rep.worst_margin);
    if (rep.violations > 0) res.fail("sector bound violated at the degree-10 reference polynomial");
    return res;
}

// Suite dispatch for the CLI; "all" runs every suite.
inline std::vector<SuiteResult> verify_suites(const std::string& which, std::uint64_t seed = 0) {
    std::vector<SuiteResult> out;
    bool all = which == "all";
    bool known = all;
    if (all || which == "heights") out.push_back(verify_heights(seed)), known = true;
    if (all || which == "padic") out.push_back(verify_padic(seed)), known = true;
    if (all || which == "bounds") out.push_back(verify_bounds(seed)), known = true;
    if (all || which == "mignotte") out.push_back(verify_mignotte(seed)), known = true;
    if (!known) throw invalid_input("unknown suite '" + which + "' (heights|padic|bounds|mignotte|all)");
    return out;
}

} // namespace lehmer
