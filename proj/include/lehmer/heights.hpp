#pragma once

#include <cstdint>
#include <vector>

#include "lehmer/bigfloat.hpp"
#include "lehmer/bigint.hpp"
#include "lehmer/errors.hpp"
#include "lehmer/intpoly.hpp"
#include "lehmer/resultant.hpp"
#include "lehmer/roots.hpp"

namespace lehmer {

// Mahler measure and Weil height with certified enclosures. For integer input
// M >= |a_d| >= 1 and h >= 0; the enclosure width is at most the requested
// tolerance.
struct HeightEstimate {
    unsigned degree = 0;
    BigFloat mahler_lo, mahler_hi;
    BigFloat height_lo, height_hi;

    double mahler() const { return 0.5 * (mahler_lo.to_double() + mahler_hi.to_double()); }
    double height() const { return 0.5 * (height_lo.to_double() + height_hi.to_double()); }
    double height_error() const {
        return 0.5 * (height_hi.to_double(MPFR_RNDU) - height_lo.to_double(MPFR_RNDD));
    }
    double mahler_error() const {
        return 0.5 * (mahler_hi.to_double(MPFR_RNDU) - mahler_lo.to_double(MPFR_RNDD));
    }
};

struct HeightOptions {
    double tolerance = 1e-12;     // on h
    mpfr_prec_t max_prec = 65536;
    bool assume_squarefree = false; // skip the repeated-factor split
};

namespace detail {

// Enclosure of M(f) for primitive f with a_0 != 0, log-width <= log_tol.
// Non-squarefree inputs split multiplicatively: M(f) = M(f/g) M(g) with
// g = gcd(f, f').
inline std::pair<BigFloat, BigFloat> mahler_interval(const IntPoly& f, double log_tol,
                                                     mpfr_prec_t max_prec,
                                                     bool assume_squarefree = false) {
    if (f.degree() == 0) {
        BigInt c = abs(f.constant_term());
        BigFloat v = BigFloat::of(c, 128);
        return {v, v};
    }
    if (f.degree() == 1) {
        BigInt m = std::max(abs(f.leading()), abs(f.constant_term()));
        BigFloat v = BigFloat::of(m, 128);
        return {v, v};
    }
    if (!assume_squarefree && sign(discriminant(f)) == 0) {
        IntPoly g = poly_gcd(f, f.derivative());
        IntPoly sf = f.divexact_by(g);
        auto a = mahler_interval(sf, log_tol / 2, max_prec);
        auto b = mahler_interval(g, log_tol / 2, max_prec);
        return {bf::mul(a.first, b.first, MPFR_RNDD), bf::mul(a.second, b.second, MPFR_RNDU)};
    }

    const unsigned d = static_cast<unsigned>(f.degree());
    double root_tol = std::min(1e-8, log_tol / (4.0 * d));
    for (int attempt = 0; attempt < 12; ++attempt) {
        RootSolveOptions ropts;
        ropts.tolerance = root_tol;
        ropts.max_prec = max_prec;
        ropts.assume_squarefree = true; // settled above or asserted by the caller
        std::vector<ComplexApprox> roots = complex_roots(f, ropts);

        const mpfr_prec_t prec = std::max<mpfr_prec_t>(128, roots[0].re.prec() + 32);
        BigFloat lo = bf::abs(BigFloat::of(f.leading(), prec));
        BigFloat hi = lo;
        BigFloat one = BigFloat::of(1.0, prec);
        for (const ComplexApprox& r : roots) {
            BigFloat mag_lo = bf::sub(bf::hypot(r.re, r.im, MPFR_RNDD),
                                      BigFloat::of(r.radius, prec), MPFR_RNDD);
            BigFloat mag_hi = bf::add(bf::hypot(r.re, r.im, MPFR_RNDU),
                                      BigFloat::of(r.radius, prec), MPFR_RNDU);
            lo = bf::mul(lo, bf::max(one, mag_lo), MPFR_RNDD);
            hi = bf::mul(hi, bf::max(one, mag_hi), MPFR_RNDU);
        }
        // every factor is >= 1, so M >= |a_d| exactly
        lo = bf::max(lo, bf::abs(BigFloat::of(f.leading(), prec)));

        double width = bf::sub(bf::log(hi, MPFR_RNDU), bf::log(lo, MPFR_RNDD), MPFR_RNDU)
                           .to_double(MPFR_RNDU);
        if (width <= log_tol) return {lo, hi};
        root_tol = std::max(root_tol * root_tol, 1e-280);
    }
    throw precision_exhausted("mahler measure enclosure did not reach tolerance");
}

} // namespace detail

// M = |a_d| prod max(1, |alpha_i|), h = log(M)/d, by interval propagation over
// certified root disks, escalating root tolerance until the h-enclosure is
// tight enough. Reducible and non-squarefree inputs are legal (reducible
// semantics: the measure of the polynomial itself).
inline HeightEstimate mahler_height(const IntPoly& f_in, const HeightOptions& opts = {}) {
    IntPoly f = f_in.primitive_part();
    if (f.degree() < 1) throw invalid_input("mahler_height: degree >= 1 required");
    if (sign(f.constant_term()) == 0) throw invalid_input("mahler_height: a_0 = 0 (zero root)");

    const unsigned d = static_cast<unsigned>(f.degree());
    HeightEstimate est;
    est.degree = d;
    auto [lo, hi] = detail::mahler_interval(f, 1.8 * d * opts.tolerance, opts.max_prec,
                                            opts.assume_squarefree);
    est.mahler_lo = lo;
    est.mahler_hi = hi;
    est.height_lo = bf::max(bf::div_ui(bf::log(lo, MPFR_RNDD), d, MPFR_RNDD),
                            BigFloat::of(0.0, lo.prec())); // h >= 0 for integer input
    est.height_hi = bf::div_ui(bf::log(hi, MPFR_RNDU), d, MPFR_RNDU);
    return est;
}

// Exact torsion (root of unity) test by cyclotomic divisibility: a monic
// irreducible f with |a_0| = 1 is torsion iff it divides x^N - 1 for some N
// with phi(N) = d. The candidate set is finite (N <= 2 d^2 + 4).
inline bool is_torsion(const IntPoly& f_in) {
    IntPoly f = f_in.primitive_part();
    const int d = f.degree();
    if (d < 1) return false;
    if (abs(f.leading()) != 1 || abs(f.constant_term()) != 1) return false;

    auto phi = [](unsigned long n) {
        unsigned long result = n;
        for (unsigned long q = 2; q * q <= n; ++q)
            if (n % q == 0) {
                result -= result / q;
                while (n % q == 0) n /= q;
            }
        if (n > 1) result -= result / n;
        return result;
    };

    const unsigned long limit = 2ul * static_cast<unsigned long>(d) * static_cast<unsigned>(d) + 4;
    for (unsigned long n = 1; n <= limit; ++n) {
        if (phi(n) != static_cast<unsigned long>(d)) continue;
        // x^n mod f == 1?
        IntPoly xn = IntPoly::monomial(1);
        IntPoly acc = IntPoly::constant(BigInt(1));
        unsigned long e = n;
        IntPoly base = xn.mod_monic(f);
        while (e) {
            if (e & 1) acc = (acc * base).mod_monic(f);
            base = (base * base).mod_monic(f);
            e >>= 1;
        }
        if (acc == IntPoly::constant(BigInt(1))) return true;
    }
    return false;
}

} // namespace lehmer
