#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lehmer/factor.hpp"
#include "lehmer/intpoly.hpp"
#include "lehmer/resultant.hpp"

#include "oracles.hpp"

using namespace lehmer;

namespace {

// Ascending-coefficient helper: poly({a0, a1, ..., ad}).
IntPoly poly(std::initializer_list<long> coeffs) { return IntPoly(coeffs); }

const IntPoly kLehmerPoly = poly({1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1});

// Enumerates all polynomials of the given degree with |coef| <= bound and
// nonzero leading coefficient, calling fn on each.
template <typename F>
void for_each_poly(int degree, long bound, F&& fn) {
    std::vector<long> c(static_cast<std::size_t>(degree) + 1, -bound);
    for (;;) {
        if (c.back() != 0) {
            std::vector<BigInt> coeffs(c.begin(), c.end());
            fn(IntPoly(std::move(coeffs)));
        }
        std::size_t i = 0;
        while (i < c.size() && c[i] == bound) c[i++] = -bound;
        if (i == c.size()) break;
        ++c[i];
    }
}

} // namespace

TEST_CASE("polynomial parsing round-trips both syntaxes") {
    CHECK(parse_poly("x^2-x-1") == poly({-1, -1, 1}));
    CHECK(parse_poly("[-1,-1,1]") == poly({-1, -1, 1}));
    CHECK(parse_poly("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1") == kLehmerPoly);
    CHECK(parse_poly("3") == IntPoly::constant(BigInt(3)));
    CHECK(parse_poly(" - x ^ 3 + 2x") == poly({0, 2, 0, -1}));
    CHECK(parse_poly("2*x^2+3*x+1") == poly({1, 3, 2}));
    CHECK_THROWS_AS((void)parse_poly("x^2 + + 1"), invalid_input);
    CHECK_THROWS_AS((void)parse_poly("[1,2"), invalid_input);
    CHECK_THROWS_AS((void)parse_poly("y+1"), invalid_input);

    IntPoly f = poly({-1, -1, 1});
    CHECK(parse_poly(f.to_string()) == f);
    CHECK(parse_poly(f.coeff_list_string()) == f);
    CHECK(parse_poly(kLehmerPoly.to_string()) == kLehmerPoly);
}

TEST_CASE("padic_valuation basics") {
    CHECK(padic_valuation(BigInt(48), 2ul) == 4);
    CHECK(padic_valuation(BigInt(5), 5ul) == 1);
    CHECK(padic_valuation(BigInt(-108), 3ul) == 3);
    CHECK_THROWS_AS((void)padic_valuation(BigInt(0), 2ul), infinite_valuation);
}

TEST_CASE("discriminant matches closed forms and the determinant oracle") {
    CHECK(discriminant(poly({-1, -1, 1})) == 5);
    CHECK(discriminant(poly({-2, 0, 0, 1})) == -108);
    CHECK(discriminant(poly({7, 3})) == 1); // degree 1: empty product
    CHECK_THROWS_AS((void)discriminant(IntPoly::constant(BigInt(4))), invalid_input);
    CHECK_THROWS_AS((void)discriminant(IntPoly()), invalid_input);

    // Independent route: Bareiss determinant of the Sylvester matrix. The
    // literal was frozen from that oracle (also confirmed by the root-product
    // oracle in the heights tests).
    CHECK(discriminant(kLehmerPoly) == oracle::sylvester_discriminant(kLehmerPoly));
    CHECK(discriminant(kLehmerPoly) == BigInt("1332031009"));

    SplitMix64 rng(20260808);
    for (int iter = 0; iter < 300; ++iter) {
        int d = 2 + static_cast<int>(rng.below(7));
        std::vector<BigInt> c(static_cast<std::size_t>(d) + 1);
        for (auto& v : c) v = static_cast<long>(rng.below(19)) - 9;
        IntPoly f(std::move(c));
        if (f.degree() < 2) continue;
        CAPTURE(f.to_string());
        CHECK(discriminant(f) == oracle::sylvester_discriminant(f));
    }
}

TEST_CASE("resultant is zero exactly when a common factor exists") {
    SplitMix64 rng(77);
    auto random_poly = [&](int maxdeg) {
        int d = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(maxdeg)));
        std::vector<BigInt> c(static_cast<std::size_t>(d) + 1);
        for (auto& v : c) v = static_cast<long>(rng.below(11)) - 5;
        return IntPoly(std::move(c));
    };
    int nonzero_checked = 0, zero_checked = 0;
    for (int iter = 0; iter < 200; ++iter) {
        IntPoly f = random_poly(6), g = random_poly(6);
        if (f.is_zero() || g.is_zero()) continue;
        BigInt r = resultant(f, g);
        bool common = poly_gcd(f, g).degree() >= 1;
        CAPTURE(f.to_string());
        CAPTURE(g.to_string());
        CHECK((sign(r) == 0) == common);
        common ? ++zero_checked : ++nonzero_checked;

        // Plant a shared factor to exercise the zero side deliberately.
        IntPoly common_factor = random_poly(2);
        if (common_factor.degree() >= 1) {
            BigInt rr = resultant(f * common_factor, g * common_factor);
            CHECK(sign(rr) == 0);
            ++zero_checked;
        }
    }
    CHECK(nonzero_checked > 50);
    CHECK(zero_checked > 50);
}

TEST_CASE("word-size and arbitrary-precision resultant paths agree") {
    SplitMix64 rng(60221023);
    for (int iter = 0; iter < 400; ++iter) {
        int df = 1 + static_cast<int>(rng.below(6));
        int dg = 1 + static_cast<int>(rng.below(6));
        std::vector<BigInt> a(static_cast<std::size_t>(df) + 1), b(static_cast<std::size_t>(dg) + 1);
        for (auto& v : a) v = static_cast<long>(rng.below(2001)) - 1000;
        for (auto& v : b) v = static_cast<long>(rng.below(2001)) - 1000;
        IntPoly f(std::move(a)), g(std::move(b));
        if (f.is_zero() || g.is_zero()) continue;

        detail::SmallPoly sf, sg;
        __int128 small = 0;
        bool small_ok = detail::to_small(f, &sf) && detail::to_small(g, &sg) &&
                        detail::small_resultant(sf, sg, &small);
        BigInt via_oracle = oracle::sylvester_resultant(f, g);
        CAPTURE(f.to_string());
        CAPTURE(g.to_string());
        CHECK(resultant(f, g) == via_oracle);
        if (small_ok) CHECK(detail::bigint_from_i128(small) == via_oracle);
    }
}

TEST_CASE("resultant agrees with the Sylvester determinant oracle") {
    SplitMix64 rng(1234);
    for (int iter = 0; iter < 200; ++iter) {
        int df = 1 + static_cast<int>(rng.below(5));
        int dg = 1 + static_cast<int>(rng.below(5));
        std::vector<BigInt> a(static_cast<std::size_t>(df) + 1), b(static_cast<std::size_t>(dg) + 1);
        for (auto& v : a) v = static_cast<long>(rng.below(15)) - 7;
        for (auto& v : b) v = static_cast<long>(rng.below(15)) - 7;
        IntPoly f(std::move(a)), g(std::move(b));
        if (f.is_zero() || g.is_zero()) continue;
        CHECK(resultant(f, g) == oracle::sylvester_resultant(f, g));
    }
}

TEST_CASE("squarefree_part strips repeated roots") {
    CHECK(squarefree_part(poly({2, -3, 0, 1})) == poly({-2, 1, 1})); // (x-1)^2(x+2) -> x^2+x-2
    CHECK(squarefree_part(poly({0, 0, 0, 0, 1})) == poly({0, 1}));               // x^4 -> x
    CHECK_THROWS_AS((void)squarefree_part(IntPoly::constant(BigInt(3))), invalid_input);

    for_each_poly(3, 2, [](const IntPoly& f) {
        if (f.degree() < 1) return;
        bool sf = sign(discriminant(f)) != 0;
        CAPTURE(f.to_string());
        CHECK(sf == (squarefree_part(f) == f.primitive_part()));
    });
}

TEST_CASE("reverse and shift") {
    CHECK(poly({1, 3, 2}).reversed() == poly({2, 3, 1}));
    CHECK_THROWS_AS((void)poly({0, 1, 1}).reversed(), invalid_input);

    auto s1 = shift_rescale(poly({-2, 0, 1}), BigInt(0), BigInt(2)); // x^2-2 @ r=0 -> 2y^2-1
    CHECK(s1.poly == poly({-1, 0, 2}));
    CHECK(s1.scale_removed == 1);

    auto s2 = shift_rescale(poly({-1, -1, 1}), BigInt(3), BigInt(5)); // -> 5y^2+5y+1
    CHECK(s2.poly == poly({1, 5, 5}));
    CHECK(s2.scale_removed == 1);

    for_each_poly(4, 2, [](const IntPoly& f) {
        if (f.is_zero() || sign(f.constant_term()) == 0) return;
        CHECK(f.reversed().reversed() == f);
    });
}

TEST_CASE("irreducibility certificates: worked examples") {
    auto c1 = is_irreducible_over_q(poly({1, 0, 1}));
    CHECK(c1.verdict == IrreducibilityCertificate::Verdict::irreducible);
    REQUIRE(c1.witness_prime.has_value());
    CHECK(*c1.witness_prime == 3); // 2 divides disc; first usable prime is 3

    auto c2 = is_irreducible_over_q(poly({1, 0, 0, 0, 1})); // x^4+1: reducible mod every prime
    CHECK(c2.verdict == IrreducibilityCertificate::Verdict::irreducible);
    CHECK(!c2.witness_prime.has_value());

    auto c3 = is_irreducible_over_q(poly({-1, 0, 1}));
    CHECK(c3.verdict == IrreducibilityCertificate::Verdict::reducible);
    REQUIRE(c3.witness_factors.has_value());
    auto [g, h] = *c3.witness_factors;
    CHECK(g * h == poly({-1, 0, 1}));

    CHECK(is_irreducible_over_q(poly({5, 3})).verdict == IrreducibilityCertificate::Verdict::degree_one);
    CHECK_THROWS_AS((void)is_irreducible_over_q(poly({2, 0, 2})), invalid_input);

    // Repeated factors are reducible with an exact witness.
    auto c4 = is_irreducible_over_q(poly({1, 2, 1}));
    CHECK(c4.verdict == IrreducibilityCertificate::Verdict::reducible);
    auto [g4, h4] = *c4.witness_factors;
    CHECK(g4 * h4 == poly({1, 2, 1}));
}

TEST_CASE("irreducibility agrees with brute-force factor search (deg <= 4, |coef| <= 3)") {
    long checked = 0;
    for (int d = 2; d <= 4; ++d) {
        for_each_poly(d, 3, [&](const IntPoly& f) {
            if (!f.is_primitive()) return;
            if (sign(f.leading()) < 0) return; // sign symmetry
            auto cert = is_irreducible_over_q(f);
            REQUIRE(cert.verdict != IrreducibilityCertificate::Verdict::unverified);
            bool reducible = cert.verdict == IrreducibilityCertificate::Verdict::reducible;
            CAPTURE(f.to_string());
            CHECK(reducible == oracle::has_proper_factor(f));
            if (reducible) {
                auto [g, h] = *cert.witness_factors;
                CHECK(g * h == f);
            }
            ++checked;
        });
    }
    CHECK(checked > 3000);
}

TEST_CASE("factor_completely splits into irreducibles") {
    IntPoly f = poly({-1, 0, 1}) * poly({1, 1, 1}) * poly({-2, 1});
    auto factors = factor_completely(f);
    CHECK(factors.size() == 4); // (x-1)(x+1)(x^2+x+1)(x-2)
    IntPoly prod = IntPoly::constant(BigInt(1));
    for (const auto& g : factors) {
        CHECK(is_irreducible_over_q(g.primitive_part()).certified_irreducible());
        prod = prod * g;
    }
    CHECK(prod.primitive_part() == f.primitive_part());
}
