#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "lehmer/bigfloat.hpp"
#include "lehmer/bigint.hpp"
#include "lehmer/errors.hpp"
#include "lehmer/intpoly.hpp"
#include "lehmer/resultant.hpp"

namespace lehmer {

// Certified complex root approximation. Disks of distinct roots are pairwise
// disjoint and each contains exactly one true root: every center satisfies
// min_k |z - alpha_k| <= d |f(z)/f'(z)| (the logarithmic-derivative bound),
// and d pairwise disjoint disks for d roots pin one root each.
struct ComplexApprox {
    BigFloat re, im;
    double radius = 0.0;

    double re_d() const { return re.to_double(); }
    double im_d() const { return im.to_double(); }
};

inline constexpr double kTau = 6.283185307179586476925286766559;

struct RootSolveOptions {
    double tolerance = 1e-12;     // max certified disk radius
    mpfr_prec_t max_prec = 65536; // escalation cap before precision_exhausted
    bool assume_squarefree = false; // caller already verified disc != 0
};

namespace detail {

// ---------- double-precision fast path ----------

struct DoubleEval {
    std::complex<double> value;
    double magnitude_sum; // sum |a_i| |z|^i, for the rounding error bound
};

inline DoubleEval eval_with_bound(const std::vector<double>& coeffs, std::complex<double> z) {
    std::complex<double> acc(0.0, 0.0);
    double s = 0.0;
    double az = std::abs(z);
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        acc = acc * z + coeffs[i];
        s = s * az + std::fabs(coeffs[i]);
    }
    return {acc, s};
}

inline std::complex<double> eval_horner(const std::vector<double>& coeffs, std::complex<double> z) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
    return acc;
}

inline bool aberth_double(const std::vector<double>& coeffs, std::vector<std::complex<double>>& z,
                          int max_iters) {
    const std::size_t d = coeffs.size() - 1;
    std::vector<double> dcoeffs(d);
    for (std::size_t i = 1; i <= d; ++i) dcoeffs[i - 1] = coeffs[i] * static_cast<double>(i);

    constexpr double conv = 1e-15;
    for (int iter = 0; iter < max_iters; ++iter) {
        double worst = 0.0; // max over roots of |step|^2 / (1 + |z|^2)
        for (std::size_t i = 0; i < d; ++i) {
            std::complex<double> fz = eval_horner(coeffs, z[i]);
            if (!std::isfinite(fz.real()) || !std::isfinite(fz.imag())) return false;
            std::complex<double> fdz = eval_horner(dcoeffs, z[i]);
            if (std::norm(fdz) == 0.0) {
                z[i] += std::complex<double>(1e-4, 1.3e-4);
                worst = 1.0;
                continue;
            }
            std::complex<double> newton = fz / fdz;
            std::complex<double> repulsion(0.0, 0.0);
            for (std::size_t j = 0; j < d; ++j) {
                if (j == i) continue;
                std::complex<double> diff = z[i] - z[j];
                if (std::norm(diff) == 0.0) diff = std::complex<double>(1e-12, 1e-12);
                repulsion += 1.0 / diff;
            }
            std::complex<double> denom = 1.0 - newton * repulsion;
            std::complex<double> step = std::norm(denom) == 0.0 ? newton : newton / denom;
            z[i] -= step;
            worst = std::max(worst, std::norm(step) / (1.0 + std::norm(z[i])));
        }
        if (worst < conv * conv) return true;
    }
    return false;
}

// Certified radius around each approximation, or negative on failure.
inline std::vector<double> certify_double(const std::vector<double>& coeffs,
                                          const std::vector<std::complex<double>>& z) {
    const std::size_t d = coeffs.size() - 1;
    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<double> dcoeffs(d);
    for (std::size_t i = 1; i <= d; ++i) dcoeffs[i - 1] = coeffs[i] * static_cast<double>(i);

    std::vector<double> radii(d, -1.0);
    for (std::size_t i = 0; i < d; ++i) {
        auto [fz, s] = eval_with_bound(coeffs, z[i]);
        auto [fdz, sd] = eval_with_bound(dcoeffs, z[i]);
        double err_f = (2.0 * static_cast<double>(d) + 2.0) * eps * s;
        double err_fd = (2.0 * static_cast<double>(d) + 2.0) * eps * sd;
        double denom = std::abs(fdz) - err_fd;
        if (denom <= 0.0) return {};
        double r = static_cast<double>(d) * (std::abs(fz) + err_f) / denom;
        radii[i] = r * (1.0 + 32.0 * eps) + std::numeric_limits<double>::min();
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            double rr = radii[i] + radii[j];
            if (std::norm(z[i] - z[j]) <= rr * rr) return {};
        }
    return radii;
}

// ---------- arbitrary-precision path ----------

struct MpEval {
    CxF value;
    BigFloat magnitude_sum;

    MpEval(mpfr_prec_t prec) : value(prec), magnitude_sum(prec) {}
};

inline MpEval eval_with_bound_mp(const std::vector<CxF>& coeffs, const CxF& z, mpfr_prec_t prec) {
    MpEval out(prec);
    BigFloat az = bf::cx_abs(z, MPFR_RNDU);
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        out.value = bf::cx_add(bf::cx_mul(out.value, z), coeffs[i]);
        out.magnitude_sum =
            bf::add(bf::mul(out.magnitude_sum, az, MPFR_RNDU), bf::cx_abs(coeffs[i], MPFR_RNDU), MPFR_RNDU);
    }
    return out;
}

inline std::vector<CxF> to_cx_coeffs(const IntPoly& f, mpfr_prec_t prec) {
    std::vector<CxF> coeffs;
    coeffs.reserve(f.coeffs().size());
    for (const auto& a : f.coeffs()) {
        CxF c(prec);
        c.re = BigFloat::of(a, prec);
        c.im = BigFloat::of(0.0, prec);
        coeffs.push_back(std::move(c));
    }
    return coeffs;
}

inline bool aberth_mp(const std::vector<CxF>& coeffs, const std::vector<CxF>& dcoeffs,
                      std::vector<CxF>& z, mpfr_prec_t prec, int max_iters) {
    const std::size_t d = coeffs.size() - 1;
    BigFloat tol = bf::mul_2exp(BigFloat::of(1.0, prec), -static_cast<long>(prec) + 6);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool done = true;
        for (std::size_t i = 0; i < d; ++i) {
            CxF fz = eval_with_bound_mp(coeffs, z[i], prec).value;
            CxF fdz = eval_with_bound_mp(dcoeffs, z[i], prec).value;
            if (bf::cx_norm(fdz).is_zero()) {
                z[i].re = bf::add(z[i].re, BigFloat::of(1e-4, prec));
                z[i].im = bf::add(z[i].im, BigFloat::of(1.3e-4, prec));
                done = false;
                continue;
            }
            CxF newton = bf::cx_div(fz, fdz);
            CxF repulsion(prec);
            for (std::size_t j = 0; j < d; ++j) {
                if (j == i) continue;
                CxF diff = bf::cx_sub(z[i], z[j]);
                if (bf::cx_norm(diff).is_zero()) {
                    diff.re = bf::add(diff.re, tol);
                    diff.im = bf::add(diff.im, tol);
                }
                CxF one(prec);
                one.re = BigFloat::of(1.0, prec);
                repulsion = bf::cx_add(repulsion, bf::cx_div(one, diff));
            }
            CxF one(prec);
            one.re = BigFloat::of(1.0, prec);
            CxF denom = bf::cx_sub(one, bf::cx_mul(newton, repulsion));
            CxF step = bf::cx_norm(denom).is_zero() ? newton : bf::cx_div(newton, denom);
            z[i] = bf::cx_sub(z[i], step);
            BigFloat rel = bf::div(bf::cx_abs(step), bf::add(BigFloat::of(1.0, prec), bf::cx_abs(z[i])));
            if (bf::cmp(rel, tol) > 0) done = false;
        }
        if (done) return true;
    }
    return false;
}

inline std::vector<BigFloat> certify_mp(const std::vector<CxF>& coeffs, const std::vector<CxF>& dcoeffs,
                                        const std::vector<CxF>& z, mpfr_prec_t prec) {
    const std::size_t d = coeffs.size() - 1;
    BigFloat eps = bf::mul_2exp(BigFloat::of(1.0, prec), -static_cast<long>(prec) + 1);
    BigFloat coef = bf::mul_ui(eps, static_cast<unsigned long>(2 * d + 2), MPFR_RNDU);

    std::vector<BigFloat> radii;
    radii.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        MpEval ef = eval_with_bound_mp(coeffs, z[i], prec);
        MpEval ed = eval_with_bound_mp(dcoeffs, z[i], prec);
        BigFloat err_f = bf::mul(coef, ef.magnitude_sum, MPFR_RNDU);
        BigFloat err_fd = bf::mul(coef, ed.magnitude_sum, MPFR_RNDU);
        BigFloat denom = bf::sub(bf::cx_abs(ed.value, MPFR_RNDD), err_fd, MPFR_RNDD);
        if (denom.sgn() <= 0) return {};
        BigFloat num = bf::add(bf::cx_abs(ef.value, MPFR_RNDU), err_f, MPFR_RNDU);
        radii.push_back(bf::mul_ui(bf::div(num, denom, MPFR_RNDU), static_cast<unsigned long>(d), MPFR_RNDU));
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            BigFloat dist = bf::cx_abs(bf::cx_sub(z[i], z[j]), MPFR_RNDD);
            if (bf::cmp(dist, bf::add(radii[i], radii[j], MPFR_RNDU)) <= 0) return {};
        }
    return radii;
}

inline void sort_roots(std::vector<ComplexApprox>& roots) {
    std::sort(roots.begin(), roots.end(), [](const ComplexApprox& a, const ComplexApprox& b) {
        int c = bf::cmp(a.re, b.re);
        if (c != 0) return c < 0;
        return bf::cmp(a.im, b.im) < 0;
    });
}

} // namespace detail

// Simultaneous Aberth refinement from a Cauchy-bound circle, with adaptive
// working-precision escalation until the a posteriori disks are pairwise
// disjoint and below tolerance.
inline std::vector<ComplexApprox> complex_roots(const IntPoly& f_in, const RootSolveOptions& opts = {}) {
    if (f_in.degree() < 1) throw invalid_input("complex_roots: degree >= 1 required");
    IntPoly f = f_in.primitive_part();
    if (!opts.assume_squarefree && sign(discriminant(f)) == 0)
        throw invalid_input("complex_roots: input must be squarefree");
    const std::size_t d = static_cast<std::size_t>(f.degree());

    // Fast path in doubles when the coefficients convert exactly.
    bool fits_double = d <= 48;
    for (const auto& a : f.coeffs())
        if (mpz_sizeinbase(a.get_mpz_t(), 2) > 52) fits_double = false;

    std::vector<std::complex<double>> seed;
    if (fits_double) {
        std::vector<double> coeffs(f.coeffs().size());
        for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = f[i].get_d();
        double cauchy = 0.0;
        for (std::size_t i = 0; i < d; ++i) cauchy = std::max(cauchy, std::fabs(coeffs[i] / coeffs[d]));
        double radius0 = 1.0 + cauchy;
        std::vector<std::complex<double>> z(d);
        for (std::size_t i = 0; i < d; ++i) {
            double angle = kTau * (static_cast<double>(i) + 0.35) / static_cast<double>(d) + 0.5;
            z[i] = std::polar(0.7 * radius0 + 0.1, angle);
        }
        if (detail::aberth_double(coeffs, z, 400)) {
            auto radii = detail::certify_double(coeffs, z);
            if (!radii.empty()) {
                double worst = 0.0;
                for (double r : radii) worst = std::max(worst, r);
                if (worst <= opts.tolerance) {
                    std::vector<ComplexApprox> out;
                    out.reserve(d);
                    for (std::size_t i = 0; i < d; ++i)
                        out.push_back({BigFloat::of(z[i].real(), 53), BigFloat::of(z[i].imag(), 53),
                                       radii[i]});
                    detail::sort_roots(out);
                    return out;
                }
            }
            seed = z; // still a good starting point for the精 refinement
        }
    }

    // Arbitrary-precision path with doubling precision.
    long tol_bits = static_cast<long>(-std::log2(std::max(opts.tolerance, 1e-300))) + 16;
    mpfr_prec_t prec = std::max<mpfr_prec_t>(128, tol_bits);
    for (; prec <= opts.max_prec; prec *= 2) {
        auto coeffs = detail::to_cx_coeffs(f, prec);
        std::vector<CxF> dcoeffs;
        dcoeffs.reserve(d);
        for (std::size_t i = 1; i <= d; ++i) {
            CxF c(prec);
            c.re = bf::mul_ui(coeffs[i].re, static_cast<unsigned long>(i));
            dcoeffs.push_back(std::move(c));
        }

        std::vector<CxF> z;
        z.reserve(d);
        if (!seed.empty()) {
            for (std::size_t i = 0; i < d; ++i)
                z.push_back({BigFloat::of(seed[i].real(), prec), BigFloat::of(seed[i].imag(), prec)});
        } else {
            BigFloat cauchy = BigFloat::of(0.0, prec);
            BigFloat lead = bf::abs(BigFloat::of(f[d], prec));
            for (std::size_t i = 0; i < d; ++i)
                cauchy = bf::max(cauchy, bf::div(bf::abs(BigFloat::of(f[i], prec)), lead));
            double radius0 = bf::add(cauchy, BigFloat::of(1.0, prec)).to_double();
            if (!std::isfinite(radius0)) radius0 = 1e300;
            for (std::size_t i = 0; i < d; ++i) {
                double angle = kTau * (static_cast<double>(i) + 0.35) / static_cast<double>(d) + 0.5;
                auto pt = std::polar(0.7 * radius0 + 0.1, angle);
                z.push_back({BigFloat::of(pt.real(), prec), BigFloat::of(pt.imag(), prec)});
            }
        }

        if (!detail::aberth_mp(coeffs, dcoeffs, z, prec, 600)) continue;
        auto radii = detail::certify_mp(coeffs, dcoeffs, z, prec);
        if (radii.empty()) continue;
        double worst = 0.0;
        for (const auto& r : radii) worst = std::max(worst, r.to_double(MPFR_RNDU));
        if (worst > opts.tolerance) continue;

        std::vector<ComplexApprox> out;
        out.reserve(d);
        for (std::size_t i = 0; i < d; ++i)
            out.push_back({z[i].re, z[i].im, radii[i].to_double(MPFR_RNDU)});
        detail::sort_roots(out);
        return out;
    }
    throw precision_exhausted("complex_roots: certification failed within the precision budget");
}

} // namespace lehmer
