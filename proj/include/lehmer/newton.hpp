#pragma once

#include <cstdint>
#include <vector>

#include "lehmer/bigint.hpp"
#include "lehmer/errors.hpp"
#include "lehmer/intpoly.hpp"

namespace lehmer {

// Lower convex hull of {(i, ord_p(a_i)) : a_i != 0}. Slopes are the hull
// slopes; root valuations are the negated slopes, one per unit of segment
// length.
struct NewtonPolygon {
    struct Segment {
        Rational slope;
        unsigned length;
    };
    std::uint64_t prime = 0;
    std::vector<Segment> segments; // slopes strictly increasing

    std::vector<Rational> root_valuations() const {
        std::vector<Rational> v;
        for (const auto& s : segments)
            for (unsigned i = 0; i < s.length; ++i) v.push_back(-s.slope);
        return v;
    }
    bool has_fractional_slope() const {
        for (const auto& s : segments)
            if (s.slope.get_den() != 1) return true;
        return false;
    }
    unsigned total_length() const {
        unsigned t = 0;
        for (const auto& s : segments) t += s.length;
        return t;
    }
    // Number of roots with negative valuation (positive slopes).
    unsigned negative_valuation_count() const {
        unsigned t = 0;
        for (const auto& s : segments)
            if (sgn(s.slope) > 0) t += s.length;
        return t;
    }
};

inline NewtonPolygon newton_polygon(const IntPoly& f, std::uint64_t p) {
    if (f.is_zero()) throw invalid_input("newton_polygon: zero polynomial");
    if (sign(f.constant_term()) == 0)
        throw invalid_input("newton_polygon: zero root (a_0 = 0)");
    if (!is_prime_u64(p)) throw invalid_input("newton_polygon: p must be prime");

    struct Pt {
        long x;
        long y;
    };
    std::vector<Pt> pts;
    for (int i = 0; i <= f.degree(); ++i) {
        const BigInt& a = f[static_cast<std::size_t>(i)];
        if (sign(a) == 0) continue;
        pts.push_back({i, static_cast<long>(padic_valuation(a, p))});
    }

    // Monotone-chain lower hull; collinear middle points dropped.
    std::vector<Pt> hull;
    for (const Pt& q : pts) {
        while (hull.size() >= 2) {
            const Pt& a = hull[hull.size() - 2];
            const Pt& b = hull[hull.size() - 1];
            // keep b only if it lies strictly below segment a-q
            long cross = (b.x - a.x) * (q.y - a.y) - (b.y - a.y) * (q.x - a.x);
            if (cross <= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(q);
    }

    NewtonPolygon np;
    np.prime = p;
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
        Rational slope(hull[i + 1].y - hull[i].y, hull[i + 1].x - hull[i].x);
        slope.canonicalize();
        np.segments.push_back({slope, static_cast<unsigned>(hull[i + 1].x - hull[i].x)});
    }
    return np;
}

} // namespace lehmer
