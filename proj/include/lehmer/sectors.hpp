#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lehmer/errors.hpp"
#include "lehmer/heights.hpp"
#include "lehmer/roots.hpp"

namespace lehmer {

// Half-open sector [start, start+width) based at the origin, angles in radians.
struct SectorSpec {
    double start = 0.0; // in [0, 2pi)
    double width = 0.0; // in [0, 2pi]
};

namespace detail {

struct RootAngle {
    double angle; // in [0, 2pi)
    double delta; // angular half-uncertainty of the disk
};

inline std::vector<RootAngle> root_angles(const std::vector<ComplexApprox>& roots) {
    std::vector<RootAngle> out;
    out.reserve(roots.size());
    for (const ComplexApprox& r : roots) {
        BigFloat mag = bf::hypot(r.re, r.im, MPFR_RNDD);
        double mag_lo = mag.to_double(MPFR_RNDD) - r.radius;
        if (mag_lo <= 0.0)
            throw boundary_ambiguous("root disk contains the origin; refine the roots first");
        double angle = bf::atan2(r.im, r.re).to_double();
        if (angle < 0.0) angle += kTau;
        if (angle >= kTau) angle -= kTau;
        double ratio = std::min(1.0, r.radius / mag_lo);
        double delta = std::asin(ratio) + 1e-15;
        out.push_back({angle, delta});
    }
    return out;
}

inline unsigned count_in_sector(const std::vector<RootAngle>& angles, const SectorSpec& s,
                                bool* ambiguous = nullptr) {
    if (s.width >= kTau) return static_cast<unsigned>(angles.size());
    unsigned n = 0;
    for (const RootAngle& ra : angles) {
        double rel = std::fmod(ra.angle - s.start, kTau);
        if (rel < 0.0) rel += kTau;
        double dist_start = std::min(rel, kTau - rel);
        double dist_end = std::fabs(rel - s.width);
        dist_end = std::min(dist_end, kTau - dist_end);
        if (std::min(dist_start, dist_end) <= ra.delta) {
            if (ambiguous) {
                *ambiguous = true;
                return 0;
            }
            throw boundary_ambiguous(
                "a root disk straddles a sector boundary; perturb the start angle by ~" +
                std::to_string(2.0 * ra.delta) + " rad or tighten the root tolerance");
        }
        if (rel < s.width) ++n;
    }
    return n;
}

} // namespace detail

// Number of roots with argument in [start, start+width). Every root disk must
// clear the boundary rays; otherwise boundary_ambiguous is thrown with a
// perturbation suggestion.
inline unsigned sector_count(const std::vector<ComplexApprox>& roots, const SectorSpec& s) {
    if (s.width < 0.0 || s.width > kTau + 1e-12)
        throw invalid_input("sector width must lie in [0, 2pi]");
    return detail::count_in_sector(detail::root_angles(roots), s);
}

// Sector-equidistribution check: |n - theta d / 2pi| <= 24 (d^{2/3} (log 2d)^{1/3}
// + d h^{1/3}) over a grid of start angles and widths. Start angles carry an
// irrational offset so integer-polynomial root arguments never sit on a ray;
// ambiguous sectors are retried with a fresh perturbation.
struct MignotteReport {
    unsigned sectors_checked = 0;
    unsigned violations = 0;
    double worst_margin = 0.0; // min over sectors of RHS - LHS; >= 0 means all hold
    double rhs_bound = 0.0;
};

inline MignotteReport mignotte_check(const IntPoly& f, unsigned n_starts = 64, unsigned n_widths = 16,
                                     double root_tolerance = 1e-10) {
    if (f.degree() < 1) throw invalid_input("mignotte_check: degree >= 1 required");
    const double d = static_cast<double>(f.degree());

    RootSolveOptions ropts;
    ropts.tolerance = root_tolerance;
    auto roots = complex_roots(f, ropts);
    auto angles = detail::root_angles(roots);

    HeightOptions hopts;
    hopts.tolerance = 1e-10;
    HeightEstimate est = mahler_height(f, hopts);
    double h_hi = est.height_hi.to_double(MPFR_RNDU);

    MignotteReport rep;
    rep.rhs_bound = 24.0 * (std::pow(d, 2.0 / 3.0) * std::cbrt(std::log(2.0 * d)) +
                            d * std::cbrt(h_hi));

    const double irrational_offset = (std::sqrt(2.0) - 1.0) * 1e-3; // of one grid cell
    rep.worst_margin = rep.rhs_bound;
    for (unsigned k = 0; k < n_starts; ++k) {
        for (unsigned m = 1; m <= n_widths; ++m) {
            double width = kTau * static_cast<double>(m) / static_cast<double>(n_widths);
            unsigned n = 0;
            bool counted = false;
            double bump = 0.0;
            for (int attempt = 0; attempt < 16 && !counted; ++attempt) {
                SectorSpec s;
                s.start = kTau * ((static_cast<double>(k) + irrational_offset) /
                                      static_cast<double>(n_starts) +
                                  bump);
                s.start = std::fmod(s.start, kTau);
                s.width = std::min(width, kTau);
                bool ambiguous = false;
                n = detail::count_in_sector(angles, s, &ambiguous);
                if (!ambiguous) counted = true;
                bump += irrational_offset * (attempt + 1) * 1e-2;
            }
            if (!counted)
                throw boundary_ambiguous("mignotte_check: could not find an unambiguous perturbation");
            double expected = std::min(width, kTau) / kTau * d;
            double margin = rep.rhs_bound - std::fabs(static_cast<double>(n) - expected);
            rep.worst_margin = std::min(rep.worst_margin, margin);
            if (margin < 0.0) ++rep.violations;
            ++rep.sectors_checked;
        }
    }
    return rep;
}

} // namespace lehmer
