#pragma once

// Independent reference computations used only by tests. Each one follows a
// different algorithmic route than the library code it cross-checks.

#include <vector>

#include "lehmer/bigint.hpp"
#include "lehmer/intpoly.hpp"

namespace lehmer::oracle {

// Resultant as the Bareiss fraction-free determinant of the Sylvester matrix.
// Exercises none of the subresultant code.
inline BigInt sylvester_resultant(const IntPoly& f, const IntPoly& g) {
    const int m = f.degree(), n = g.degree();
    if (m < 0 || n < 0) return BigInt(0);
    if (m == 0 && n == 0) return BigInt(1);
    const int N = m + n;
    std::vector<std::vector<BigInt>> a(static_cast<std::size_t>(N),
                                       std::vector<BigInt>(static_cast<std::size_t>(N), BigInt(0)));
    for (int row = 0; row < n; ++row)
        for (int j = 0; j <= m; ++j) a[row][row + j] = f[static_cast<std::size_t>(m - j)];
    for (int row = 0; row < m; ++row)
        for (int j = 0; j <= n; ++j) a[n + row][row + j] = g[static_cast<std::size_t>(n - j)];

    // Bareiss elimination: all divisions exact.
    int sign_flip = 1;
    BigInt prev(1);
    for (int k = 0; k < N - 1; ++k) {
        if (lehmer::sign(a[k][k]) == 0) {
            int swap_row = -1;
            for (int i = k + 1; i < N; ++i)
                if (lehmer::sign(a[i][k]) != 0) {
                    swap_row = i;
                    break;
                }
            if (swap_row < 0) return BigInt(0);
            std::swap(a[static_cast<std::size_t>(k)], a[static_cast<std::size_t>(swap_row)]);
            sign_flip = -sign_flip;
        }
        for (int i = k + 1; i < N; ++i)
            for (int j = k + 1; j < N; ++j)
                a[i][j] = divexact(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev);
        prev = a[k][k];
    }
    return sign_flip * a[static_cast<std::size_t>(N - 1)][static_cast<std::size_t>(N - 1)];
}

inline BigInt sylvester_discriminant(const IntPoly& f) {
    const int d = f.degree();
    if (d == 1) return BigInt(1);
    BigInt r = sylvester_resultant(f, f.derivative());
    BigInt dd = divexact(r, f.leading());
    if (((static_cast<long>(d) * (d - 1)) / 2) & 1) dd = -dd;
    return dd;
}

// Exhaustive factor search for deg <= 4 using the Mignotte per-factor bound
// 2^{deg g} * ||f||_2: true iff a nonconstant proper factor exists over Z.
inline bool has_proper_factor(const IntPoly& f) {
    const int d = f.degree();
    if (d <= 1) return false;
    if (lehmer::sign(f.constant_term()) == 0) return true; // x divides

    auto divisors_signed = [](const BigInt& n0) {
        BigInt n = abs(n0);
        std::vector<long> out;
        for (long i = 1; BigInt(i) * i <= n; ++i)
            if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(i))) {
                long j = BigInt(n / i).get_si();
                out.push_back(i);
                out.push_back(-i);
                if (j != i) {
                    out.push_back(j);
                    out.push_back(-j);
                }
            }
        return out;
    };

    // degree-1 factor <=> rational root r/s with s | a_d, r | a_0
    for (long r : divisors_signed(f.constant_term()))
        for (long s : divisors_signed(f.leading())) {
            if (s <= 0) continue;
            Rational x(r, s);
            x.canonicalize();
            if (lehmer::sign(f.eval(x).get_num()) == 0) return true;
        }
    if (d <= 3) return false;

    // degree-2 factor of a quartic
    BigInt norm2_sq(0);
    for (const auto& v : f.coeffs()) norm2_sq += v * v;
    long B = isqrt_ceil(norm2_sq).get_si() * 4 + 1;
    for (long b2 : divisors_signed(f.leading())) {
        if (b2 <= 0) continue; // factor sign normalization
        BigInt c2 = divexact(f.leading(), BigInt(b2));
        for (long b0 : divisors_signed(f.constant_term())) {
            BigInt c0 = divexact(f.constant_term(), BigInt(b0));
            for (long b1 = -B; b1 <= B; ++b1) {
                // a3 = b2*c1 + b1*c2
                BigInt num = f[3] - b1 * c2;
                BigInt b2z(b2);
                if (!mpz_divisible_p(num.get_mpz_t(), b2z.get_mpz_t())) continue;
                BigInt c1 = divexact(num, b2z);
                if (f[2] != b2 * c0 + BigInt(b1) * c1 + b0 * c2) continue;
                if (f[1] != BigInt(b1) * c0 + b0 * c1) continue;
                return true;
            }
        }
    }
    return false;
}

} // namespace lehmer::oracle
