#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "lehmer/bounds.hpp"
#include "lehmer/factor.hpp"
#include "lehmer/heights.hpp"
#include "lehmer/intpoly.hpp"
#include "lehmer/padic.hpp"

namespace lehmer {

struct AnalyzeOptions {
    std::vector<std::uint64_t> primes{2, 3, 5, 7};
    unsigned f_max = 3;
    double tolerance = 1e-12;  // on h
    double safety_slack = 1e-9; // bound <= h + slack
    std::uint64_t seed = 0;
    FactorOptions factor;
};

struct SingleFieldEntry {
    std::uint64_t p = 0;
    unsigned level = 1;
    unsigned membership = 0;
    double value = 0.0;
};

// Everything the bound machinery produced for one polynomial, with verdicts.
// The central safety property: every bound value <= h + slack whenever the
// theorem hypotheses hold (non-torsion irreducible input; monic for the
// multi-field family).
struct BoundReport {
    IntPoly poly; // primitive, positive leading coefficient
    unsigned degree = 0;
    bool content_stripped = false;
    bool monic = false;
    IrreducibilityCertificate cert;
    bool torsion = false;
    HeightEstimate height;

    std::vector<LocalProfile> profiles;
    std::vector<SingleFieldEntry> single_field;
    bool multi_available = false;
    double multi_field = 0.0;
    double fieldwise = 0.0;
    double collision_exact = 0.0;
    MahlerMargin mahler_margin;
    std::vector<ValuationMargin> valuation_margins;

    bool ramified_dropped = false;
    bool vacuous = false;   // torsion, reducible, or unverified: bound verdicts not applicable
    bool safety_ok = true;  // every applicable bound <= h + slack
    double worst_gap = 0.0; // min over bounds of h - bound (most negative = worst)

    double h() const { return height.height(); }
    bool irreducible() const { return cert.certified_irreducible(); }
};

inline BoundReport analyze(const IntPoly& input, const AnalyzeOptions& opts = {}) {
    if (input.degree() < 1) throw invalid_input("analyze: degree >= 1 required");
    BoundReport rep;
    rep.poly = input.primitive_part();
    rep.content_stripped = !(rep.poly == input);
    rep.degree = static_cast<unsigned>(rep.poly.degree());
    if (sign(rep.poly.constant_term()) == 0)
        throw invalid_input("analyze: zero is a root (a_0 = 0); nonzero algebraic numbers only");
    rep.monic = rep.poly.is_monic();

    rep.cert = is_irreducible_over_q(rep.poly, opts.factor);
    rep.torsion = rep.cert.certified_irreducible() && is_torsion(rep.poly);

    HeightOptions hopts;
    hopts.tolerance = opts.tolerance;
    rep.height = mahler_height(rep.poly, hopts);

    IntPoly sf = rep.cert.certified_irreducible() ? rep.poly : squarefree_part(rep.poly);

    std::set<std::uint64_t> primes(opts.primes.begin(), opts.primes.end());
    for (std::uint64_t p : primes) {
        if (!is_prime_u64(p)) throw invalid_input("analyze: prime set contains a composite");
        rep.profiles.push_back(local_profile(sf, p, opts.f_max, opts.seed));
    }

    for (const auto& prof : rep.profiles) {
        rep.ramified_dropped |= prof.ramified_or_deep;
        for (const auto& st : prof.levels) {
            SingleFieldEntry e;
            e.p = prof.p;
            e.level = st.level;
            e.membership = st.membership_count;
            e.value = single_field_bound(rep.degree, st.membership_count,
                                         LocalFieldDescriptor{prof.p, 1, st.level});
            rep.single_field.push_back(e);
            rep.valuation_margins.push_back(valuation_inequality_check(st, prof.ord_p_disc, prof.p));
        }
    }

    if (rep.monic) {
        rep.multi_available = true;
        rep.multi_field = multi_field_bound(rep.poly, rep.profiles);
        rep.fieldwise = fieldwise_bound(rep.poly, rep.profiles);
        rep.collision_exact = exact_collision_bound(rep.poly, rep.profiles);
    }

    rep.mahler_margin = mahler_inequality_check(rep.poly, rep.height);

    rep.vacuous = rep.torsion || !rep.cert.certified_irreducible();
    const double h = rep.h();
    double worst = std::numeric_limits<double>::infinity();
    bool ok = true;
    auto consider = [&](double bound) {
        worst = std::min(worst, h - bound);
        if (bound > h + opts.safety_slack) ok = false;
    };
    for (const auto& e : rep.single_field) consider(e.value);
    if (rep.multi_available) {
        consider(rep.multi_field);
        consider(rep.fieldwise);
        consider(rep.collision_exact);
    }
    rep.worst_gap = worst;
    rep.safety_ok = ok;
    return rep;
}

inline const char* verdict_name(IrreducibilityCertificate::Verdict v) {
    switch (v) {
        case IrreducibilityCertificate::Verdict::irreducible: return "irreducible";
        case IrreducibilityCertificate::Verdict::reducible: return "reducible";
        case IrreducibilityCertificate::Verdict::degree_one: return "degree-one";
        case IrreducibilityCertificate::Verdict::unverified: return "unverified";
    }
    return "?";
}

inline void print_report(std::ostream& os, const BoundReport& r) {
    os << "polynomial       " << r.poly.to_string() << "   " << r.poly.coeff_list_string() << "\n";
    os << "degree           " << r.degree << (r.monic ? "   (monic)" : "") << "\n";
    os << "irreducibility   " << verdict_name(r.cert.verdict);
    if (r.cert.witness_prime) os << " (mod-" << *r.cert.witness_prime << " certificate)";
    if (r.cert.witness_factors)
        os << " (" << r.cert.witness_factors->first.to_string() << ")("
           << r.cert.witness_factors->second.to_string() << ")";
    os << "\n";
    os << "torsion          " << (r.torsion ? "yes (height lower bounds are vacuous)" : "no") << "\n";
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.15g  (err <= %.3g)", r.h(), r.height.height_error());
    os << "height h         " << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.15g", r.height.mahler());
    os << "mahler M         " << buf << "\n";

    for (const auto& prof : r.profiles) {
        os << "p=" << prof.p << "  ord_p(D)=" << prof.ord_p_disc << "  levels";
        for (const auto& st : prof.levels)
            os << "  " << st.level << ":" << st.membership_count << "/" << st.integral_count;
        os << "  generators";
        for (const auto& [lvl, n] : prof.exact_generator_counts) os << "  " << lvl << ":" << n;
        os << "  unaccounted " << prof.unaccounted_count
           << (prof.ramified_or_deep ? "  [ramified/deep dropped]" : "") << "\n";
    }

    double best_single = -std::numeric_limits<double>::infinity();
    const SingleFieldEntry* best_entry = nullptr;
    for (const auto& e : r.single_field)
        if (e.value > best_single) {
            best_single = e.value;
            best_entry = &e;
        }
    if (best_entry) {
        std::snprintf(buf, sizeof buf, "%.6g", best_entry->value);
        os << "single-field     best " << buf << "  (p=" << best_entry->p
           << ", level=" << best_entry->level << ", |S_K|=" << best_entry->membership << ")\n";
    }
    if (r.multi_available) {
        std::snprintf(buf, sizeof buf, "multi-field %.6g   fieldwise %.6g   exact-collision %.6g",
                      r.multi_field, r.fieldwise, r.collision_exact);
        os << "integer bounds   " << buf << "\n";
    } else {
        os << "integer bounds   skipped (input not monic; stated for algebraic integers)\n";
    }
    std::snprintf(buf, sizeof buf, "%.6g", r.mahler_margin.margin);
    os << "mahler margin    " << buf << (r.mahler_margin.holds ? "  ok" : "  VIOLATED") << "\n";

    long worst_val_margin = std::numeric_limits<long>::max();
    for (const auto& m : r.valuation_margins) worst_val_margin = std::min(worst_val_margin, m.margin);
    if (!r.valuation_margins.empty())
        os << "valuation margin min " << worst_val_margin
           << (worst_val_margin >= 0 ? "  ok" : "  VIOLATED") << "\n";

    if (r.vacuous)
        os << "verdict          vacuous (" << (r.torsion ? "torsion input" : verdict_name(r.cert.verdict))
           << "); bound comparisons not applicable\n";
    else {
        std::snprintf(buf, sizeof buf, "%.6g", r.worst_gap);
        os << "verdict          " << (r.safety_ok ? "all bounds <= h" : "SAFETY VIOLATION")
           << "  (worst gap " << buf << ")\n";
    }
}

} // namespace lehmer
