#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>

#include <mpfr.h>

#include "lehmer/bigint.hpp"
#include "lehmer/errors.hpp"

namespace lehmer {

// Thin RAII wrapper over mpfr_t. Binary operations round to nearest at the
// max precision of the operands unless a directed variant is used.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t prec = 64) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, 2);
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    static BigFloat of(double x, mpfr_prec_t prec = 64) {
        BigFloat r(prec);
        mpfr_set_d(r.v_, x, MPFR_RNDN);
        return r;
    }
    static BigFloat of(long x, mpfr_prec_t prec = 64) {
        BigFloat r(prec);
        mpfr_set_si(r.v_, x, MPFR_RNDN);
        return r;
    }
    static BigFloat of(const BigInt& x, mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_set_z(r.v_, x.get_mpz_t(), MPFR_RNDN);
        return r;
    }
    static BigFloat of(const Rational& x, mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_set_q(r.v_, x.get_mpq_t(), MPFR_RNDN);
        return r;
    }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }
    bool is_zero() const { return mpfr_zero_p(v_); }
    bool is_finite() const { return mpfr_number_p(v_); }
    int sgn() const { return mpfr_sgn(v_); }

    std::string str(std::size_t digits = 20) const {
        char* s = nullptr;
        if (mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), v_) < 0)
            throw internal_error("mpfr_asprintf failed");
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

private:
    mpfr_t v_;
};

namespace bf {

inline mpfr_prec_t join_prec(const BigFloat& a, const BigFloat& b) {
    return std::max(a.prec(), b.prec());
}

#define LEHMER_BF_BINOP(name, fun)                                                        \
    inline BigFloat name(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd = MPFR_RNDN) { \
        BigFloat r(join_prec(a, b));                                                      \
        fun(r.get(), a.get(), b.get(), rnd);                                              \
        return r;                                                                         \
    }

LEHMER_BF_BINOP(add, mpfr_add)
LEHMER_BF_BINOP(sub, mpfr_sub)
LEHMER_BF_BINOP(mul, mpfr_mul)
LEHMER_BF_BINOP(div, mpfr_div)
LEHMER_BF_BINOP(atan2, mpfr_atan2)
LEHMER_BF_BINOP(hypot, mpfr_hypot)
#undef LEHMER_BF_BINOP

inline BigFloat neg(const BigFloat& a) {
    BigFloat r(a.prec());
    mpfr_neg(r.get(), a.get(), MPFR_RNDN);
    return r;
}
inline BigFloat abs(const BigFloat& a, mpfr_rnd_t rnd = MPFR_RNDN) {
    BigFloat r(a.prec());
    mpfr_abs(r.get(), a.get(), rnd);
    return r;
}
inline BigFloat sqrt(const BigFloat& a, mpfr_rnd_t rnd = MPFR_RNDN) {
    BigFloat r(a.prec());
    mpfr_sqrt(r.get(), a.get(), rnd);
    return r;
}
inline BigFloat log(const BigFloat& a, mpfr_rnd_t rnd = MPFR_RNDN) {
    BigFloat r(a.prec());
    mpfr_log(r.get(), a.get(), rnd);
    return r;
}
inline BigFloat pi(mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_const_pi(r.get(), MPFR_RNDN);
    return r;
}
inline BigFloat mul_2exp(const BigFloat& a, long e) {
    BigFloat r(a.prec());
    mpfr_mul_2si(r.get(), a.get(), e, MPFR_RNDN);
    return r;
}
inline BigFloat div_ui(const BigFloat& a, unsigned long n, mpfr_rnd_t rnd = MPFR_RNDN) {
    BigFloat r(a.prec());
    mpfr_div_ui(r.get(), a.get(), n, rnd);
    return r;
}
inline BigFloat mul_ui(const BigFloat& a, unsigned long n, mpfr_rnd_t rnd = MPFR_RNDN) {
    BigFloat r(a.prec());
    mpfr_mul_ui(r.get(), a.get(), n, rnd);
    return r;
}
inline int cmp(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.get(), b.get()); }
inline bool less(const BigFloat& a, const BigFloat& b) { return cmp(a, b) < 0; }
inline BigFloat max(const BigFloat& a, const BigFloat& b) { return less(a, b) ? b : a; }
inline BigFloat min(const BigFloat& a, const BigFloat& b) { return less(a, b) ? a : b; }

} // namespace bf

// Complex number on BigFloat components (matching precisions by use).
struct CxF {
    BigFloat re, im;

    explicit CxF(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
    CxF(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
};

namespace bf {

inline CxF cx_add(const CxF& a, const CxF& b) { return {add(a.re, b.re), add(a.im, b.im)}; }
inline CxF cx_sub(const CxF& a, const CxF& b) { return {sub(a.re, b.re), sub(a.im, b.im)}; }
inline CxF cx_mul(const CxF& a, const CxF& b) {
    return {sub(mul(a.re, b.re), mul(a.im, b.im)), add(mul(a.re, b.im), mul(a.im, b.re))};
}
inline BigFloat cx_abs(const CxF& a, mpfr_rnd_t rnd = MPFR_RNDN) { return hypot(a.re, a.im, rnd); }
inline BigFloat cx_norm(const CxF& a) { return add(mul(a.re, a.re), mul(a.im, a.im)); }
inline CxF cx_div(const CxF& a, const CxF& b) {
    BigFloat n = cx_norm(b);
    if (n.is_zero()) throw internal_error("complex division by zero");
    return {div(add(mul(a.re, b.re), mul(a.im, b.im)), n),
            div(sub(mul(a.im, b.re), mul(a.re, b.im)), n)};
}
inline CxF cx_neg(const CxF& a) { return {neg(a.re), neg(a.im)}; }

} // namespace bf

} // namespace lehmer
