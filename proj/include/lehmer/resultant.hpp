#pragma once

#include <array>
#include <utility>
#include <vector>

#include "lehmer/bigint.hpp"
#include "lehmer/errors.hpp"
#include "lehmer/intpoly.hpp"

namespace lehmer {

namespace detail {

// ---- checked 128-bit fast path for small inputs ----
// Same subresultant sequence as the arbitrary-precision route below; any
// overflow abandons the attempt and the caller falls back to GMP.

struct SmallPoly {
    std::array<__int128, 16> c{};
    int deg = -1;
};

inline __int128 i128_abs(__int128 v) { return v < 0 ? -v : v; }

inline __int128 i128_gcd(__int128 a, __int128 b) {
    a = i128_abs(a);
    b = i128_abs(b);
    while (b) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline bool small_mul(__int128 a, __int128 b, __int128* out) {
    return !__builtin_mul_overflow(a, b, out);
}

inline bool small_pow(__int128 base, unsigned long e, __int128* out) {
    __int128 r = 1;
    while (e) {
        if (e & 1) {
            if (!small_mul(r, base, &r)) return false;
        }
        e >>= 1;
        if (e && !small_mul(base, base, &base)) return false;
    }
    *out = r;
    return true;
}

inline void small_trim(SmallPoly& p) {
    while (p.deg >= 0 && p.c[static_cast<std::size_t>(p.deg)] == 0) --p.deg;
}

// R = lc(B)^(degA-degB+1) A - Q B, exactly that power.
inline bool small_prem(const SmallPoly& A, const SmallPoly& B, SmallPoly* R) {
    const __int128 lb = B.c[static_cast<std::size_t>(B.deg)];
    SmallPoly r = A;
    long e = A.deg - B.deg + 1;
    while (r.deg >= B.deg) {
        const __int128 top = r.c[static_cast<std::size_t>(r.deg)];
        const int shift = r.deg - B.deg;
        for (int i = 0; i <= r.deg; ++i)
            if (!small_mul(r.c[static_cast<std::size_t>(i)], lb, &r.c[static_cast<std::size_t>(i)]))
                return false;
        for (int j = 0; j <= B.deg; ++j) {
            __int128 t;
            if (!small_mul(top, B.c[static_cast<std::size_t>(j)], &t)) return false;
            if (__builtin_sub_overflow(r.c[static_cast<std::size_t>(shift + j)], t,
                                       &r.c[static_cast<std::size_t>(shift + j)]))
                return false;
        }
        small_trim(r);
        --e;
        if (r.deg < 0) break;
    }
    if (e > 0) {
        __int128 scale;
        if (!small_pow(lb, static_cast<unsigned long>(e), &scale)) return false;
        for (int i = 0; i <= r.deg; ++i)
            if (!small_mul(r.c[static_cast<std::size_t>(i)], scale, &r.c[static_cast<std::size_t>(i)]))
                return false;
    }
    *R = r;
    return true;
}

inline bool small_resultant(SmallPoly A, SmallPoly B, __int128* out) {
    if (A.deg < 0 || B.deg < 0) {
        *out = 0;
        return true;
    }
    if (A.deg == 0 && B.deg == 0) {
        *out = 1;
        return true;
    }
    int s = 1;
    if (A.deg < B.deg) {
        if ((A.deg & 1) && (B.deg & 1)) s = -s;
        std::swap(A, B);
    }
    if (B.deg == 0) return small_pow(B.c[0], static_cast<unsigned long>(A.deg), out) && (*out *= s, true);

    __int128 ca = 0, cb = 0;
    for (int i = 0; i <= A.deg; ++i) ca = i128_gcd(ca, A.c[static_cast<std::size_t>(i)]);
    for (int i = 0; i <= B.deg; ++i) cb = i128_gcd(cb, B.c[static_cast<std::size_t>(i)]);
    if (A.c[static_cast<std::size_t>(A.deg)] < 0) ca = -ca;
    if (B.c[static_cast<std::size_t>(B.deg)] < 0) cb = -cb;
    for (int i = 0; i <= A.deg; ++i) A.c[static_cast<std::size_t>(i)] /= ca;
    for (int i = 0; i <= B.deg; ++i) B.c[static_cast<std::size_t>(i)] /= cb;
    __int128 t, ta, tb;
    if (!small_pow(ca, static_cast<unsigned long>(B.deg), &ta)) return false;
    if (!small_pow(cb, static_cast<unsigned long>(A.deg), &tb)) return false;
    if (!small_mul(ta, tb, &t)) return false;

    __int128 g = 1, h = 1;
    for (;;) {
        const int da = A.deg, db = B.deg;
        const unsigned long delta = static_cast<unsigned long>(da - db);
        if ((da & 1) && (db & 1)) s = -s;
        SmallPoly R;
        if (!small_prem(A, B, &R)) return false;
        A = B;
        if (R.deg < 0) {
            *out = 0;
            return true;
        }
        __int128 hp, denom;
        if (!small_pow(h, delta, &hp)) return false;
        if (!small_mul(g, hp, &denom)) return false;
        B = R;
        for (int i = 0; i <= B.deg; ++i) {
            if (B.c[static_cast<std::size_t>(i)] % denom != 0) return false;
            B.c[static_cast<std::size_t>(i)] /= denom;
        }
        g = A.c[static_cast<std::size_t>(A.deg)];
        if (delta > 0) {
            __int128 num;
            if (!small_pow(g, delta, &num)) return false;
            if (delta == 1)
                h = num;
            else {
                __int128 hd;
                if (!small_pow(h, delta - 1, &hd)) return false;
                if (num % hd != 0) return false;
                h = num / hd;
            }
        }
        if (B.deg <= 0) break;
    }
    const unsigned long da = static_cast<unsigned long>(A.deg);
    __int128 num;
    if (!small_pow(B.c[0], da, &num)) return false;
    __int128 res;
    if (da <= 1)
        res = da == 1 ? num : h;
    else {
        __int128 hd;
        if (!small_pow(h, da - 1, &hd)) return false;
        if (num % hd != 0) return false;
        res = num / hd;
    }
    if (!small_mul(res, t, &res)) return false;
    if (s < 0) res = -res;
    *out = res;
    return true;
}

inline bool to_small(const IntPoly& f, SmallPoly* out) {
    if (f.degree() > 12) return false;
    out->deg = f.degree();
    for (int i = 0; i <= f.degree(); ++i) {
        const BigInt& a = f[static_cast<std::size_t>(i)];
        if (mpz_sizeinbase(a.get_mpz_t(), 2) > 40) return false;
        out->c[static_cast<std::size_t>(i)] =
            static_cast<__int128>(mpz_get_si(a.get_mpz_t()));
    }
    return true;
}

inline BigInt bigint_from_i128(__int128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                              : static_cast<unsigned __int128>(v);
    BigInt r(static_cast<unsigned long>(u >> 64));
    r <<= 64;
    r += static_cast<unsigned long>(u & 0xFFFFFFFFFFFFFFFFULL);
    return neg ? BigInt(-r) : r;
}

// Pseudo-remainder: lc(B)^{degA-degB+1} * A = Q*B + R, with exactly that
// power even when intermediate degrees drop by more than one.
inline IntPoly pseudo_rem(const IntPoly& A, const IntPoly& B) {
    const int db = B.degree();
    const BigInt& lb = B.leading();
    IntPoly R = A;
    long e = A.degree() - db + 1;
    while (!R.is_zero() && R.degree() >= db) {
        const int dr = R.degree();
        IntPoly S = IntPoly::monomial(static_cast<unsigned>(dr - db), R.leading()) * B;
        R = R * lb - S;
        --e;
    }
    if (e > 0) R = R * pow_ui(lb, static_cast<unsigned long>(e));
    return R;
}

} // namespace detail

// Resultant over Z via the subresultant polynomial remainder sequence;
// intermediate growth stays polynomial in the input size. Small inputs run
// on checked 128-bit words and fall back to GMP on overflow.
inline BigInt resultant(IntPoly A, IntPoly B) {
    if (A.is_zero() || B.is_zero()) return BigInt(0);
    if (A.degree() == 0 && B.degree() == 0) return BigInt(1);

    {
        detail::SmallPoly sa, sb;
        __int128 r;
        if (detail::to_small(A, &sa) && detail::to_small(B, &sb) &&
            detail::small_resultant(sa, sb, &r))
            return detail::bigint_from_i128(r);
    }

    int s = 1;
    if (A.degree() < B.degree()) {
        if ((A.degree() & 1) && (B.degree() & 1)) s = -s;
        std::swap(A, B);
    }
    if (B.degree() == 0) return s * pow_ui(B.leading(), static_cast<unsigned long>(A.degree()));

    BigInt ca = A.content(), cb = B.content();
    A = A.divexact_by(IntPoly::constant(ca)); // keeps leading sign
    B = B.divexact_by(IntPoly::constant(cb));
    BigInt t = pow_ui(ca, static_cast<unsigned long>(B.degree())) *
               pow_ui(cb, static_cast<unsigned long>(A.degree()));

    BigInt g(1), h(1);
    for (;;) {
        const int da = A.degree(), db = B.degree();
        const unsigned long delta = static_cast<unsigned long>(da - db);
        if ((da & 1) && (db & 1)) s = -s;
        IntPoly R = detail::pseudo_rem(A, B);
        A = std::move(B);
        if (R.is_zero()) return BigInt(0); // nonconstant gcd
        BigInt denom = g * pow_ui(h, delta);
        B = R.divexact_by(IntPoly::constant(denom));
        g = A.leading();
        // h <- h^{1-delta} g^{delta}, kept as an exact integer
        if (delta == 0) {
            // h unchanged
        } else {
            BigInt num = pow_ui(g, delta);
            h = delta == 1 ? num : divexact(num, pow_ui(h, delta - 1));
        }
        if (B.degree() <= 0) break;
    }
    if (B.is_zero()) return BigInt(0);
    // A holds the last remainder of positive degree, B the final constant.
    const unsigned long da = static_cast<unsigned long>(A.degree());
    BigInt num = pow_ui(B.leading(), da);
    BigInt res = da <= 1 ? (da == 1 ? num : h) : divexact(num, pow_ui(h, da - 1));
    return s * t * res;
}

// D(f) = (-1)^{d(d-1)/2} Res(f, f') / a_d, exactly. Degree-1 input returns 1
// (empty product). Zero or constant input is rejected.
inline BigInt discriminant(const IntPoly& f) {
    const int d = f.degree();
    if (d < 1) throw invalid_input("discriminant requires degree >= 1");
    if (d == 1) return BigInt(1);
    BigInt r = resultant(f, f.derivative());
    BigInt dd = divexact(r, f.leading());
    if (((static_cast<long>(d) * (d - 1)) / 2) & 1) dd = -dd;
    return dd;
}

// Primitive gcd over Z[x] via a primitive remainder sequence.
inline IntPoly poly_gcd(IntPoly a, IntPoly b) {
    if (a.is_zero()) return b.is_zero() ? IntPoly() : b.primitive_part();
    if (b.is_zero()) return a.primitive_part();
    a = a.primitive_part();
    b = b.primitive_part();
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        if (b.degree() == 0) return IntPoly::constant(BigInt(1));
        IntPoly r = detail::pseudo_rem(a, b);
        a = std::move(b);
        b = r.is_zero() ? IntPoly() : r.primitive_part();
    }
    return a;
}

// Primitive f / gcd(f, f'): same roots, all simple.
inline IntPoly squarefree_part(const IntPoly& f) {
    if (f.degree() < 1) throw invalid_input("squarefree_part requires degree >= 1");
    IntPoly g = poly_gcd(f, f.derivative());
    if (g.degree() == 0) return f.primitive_part();
    return f.primitive_part().divexact_by(g).primitive_part();
}

inline bool is_squarefree(const IntPoly& f) {
    if (f.degree() < 1) return false;
    return sign(discriminant(f)) != 0;
}

} // namespace lehmer
