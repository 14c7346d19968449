#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lehmer/newton.hpp"
#include "lehmer/padic.hpp"
#include "lehmer/reference.hpp"

using namespace lehmer;

namespace {

IntPoly poly(std::initializer_list<long> coeffs) { return IntPoly(coeffs); }

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

unsigned histogram_at(const UnramifiedLevelStats& st, std::uint64_t index) {
    for (const auto& [res, n] : st.residue_histogram)
        if (res.encode(*st.field) == index) return n;
    return 0;
}

} // namespace

TEST_CASE("newton polygon worked examples") {
    auto np1 = newton_polygon(poly({-2, 0, 1}), 2); // x^2-2
    REQUIRE(np1.segments.size() == 1);
    CHECK(np1.segments[0].slope == Rational(-1, 2));
    CHECK(np1.segments[0].length == 2);
    auto vals1 = np1.root_valuations();
    CHECK(vals1 == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    CHECK(np1.has_fractional_slope());

    auto np2 = newton_polygon(poly({-1, -1, 1}), 5); // x^2-x-1: all valuations 0
    REQUIRE(np2.segments.size() == 1);
    CHECK(np2.segments[0].slope == Rational(0));
    CHECK(np2.segments[0].length == 2);

    auto np3 = newton_polygon(poly({2, 1, 1}), 2); // x^2+x+2: valuations {1, 0}
    auto vals3 = np3.root_valuations();
    REQUIRE(vals3.size() == 2);
    CHECK(vals3[0] == Rational(1));
    CHECK(vals3[1] == Rational(0));

    CHECK_THROWS_AS((void)newton_polygon(poly({0, 1, 1}), 2), invalid_input);
    CHECK_THROWS_AS((void)newton_polygon(IntPoly(), 3), invalid_input);
}

TEST_CASE("polygon mass equals the degree over an enumeration") {
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
        for_each_poly(4, 2, [&](const IntPoly& f) {
            if (f.is_zero() || sign(f.constant_term()) == 0) return;
            auto np = newton_polygon(f, p);
            CHECK(np.total_length() == static_cast<unsigned>(f.degree()));
        });
    }
}

TEST_CASE("count_roots_unramified worked examples") {
    // x^2+1 at p=5, level 1: two integral roots with residues {2, 3}
    auto s1 = count_roots_unramified(poly({1, 0, 1}), 5, 1);
    CHECK(s1.integral_count == 2);
    CHECK(s1.nonintegral_count == 0);
    CHECK(s1.membership_count == 2);
    CHECK(histogram_at(s1, 2) == 1);
    CHECK(histogram_at(s1, 3) == 1);

    // x^2-2 at p=2, level 1: root valuation 1/2, no K-rational root
    auto s2 = count_roots_unramified(poly({-2, 0, 1}), 2, 1);
    CHECK(s2.membership_count == 0);

    // x^2+1 at p=3, level 2: roots t and 2t in F_9 with modulus t^2+1
    auto s3 = count_roots_unramified(poly({1, 0, 1}), 3, 2);
    CHECK(s3.integral_count == 2);
    CHECK(histogram_at(s3, 3) == 1); // t
    CHECK(histogram_at(s3, 6) == 1); // 2t

    // x^2-x-1 at p=5: degenerate residue, recursion terminates with none
    auto s4 = count_roots_unramified(poly({-1, -1, 1}), 5, 1);
    CHECK(s4.membership_count == 0);
    CHECK(s4.max_recursion_depth >= 1);

    CHECK_THROWS_AS((void)count_roots_unramified(poly({1, 2, 1}), 5, 1), invalid_input);
    CHECK_THROWS_AS((void)count_roots_unramified(poly({0, 1, 1}), 5, 1), invalid_input);
}

TEST_CASE("nonintegral roots come from the reversed polynomial") {
    // 2x^2-1: roots +-1/sqrt(2) have valuation -1/2 at p=2: not in K
    auto s1 = count_roots_unramified(poly({-1, 0, 2}), 2, 1);
    CHECK(s1.membership_count == 0);

    // 4x^2-1: roots +-1/2, valuation -2 at p=2: nonintegral members of Q_2
    auto s2 = count_roots_unramified(poly({-1, 0, 4}), 2, 1);
    CHECK(s2.integral_count == 0);
    CHECK(s2.nonintegral_count == 2);
    CHECK(s2.membership_count == 2);

    // 2x-3: root 3/2 nonintegral at p=2, integral at p=3
    auto s3 = count_roots_unramified(poly({-3, 2}), 2, 1);
    CHECK(s3.nonintegral_count == 1);
    CHECK(s3.integral_count == 0);
    auto s4 = count_roots_unramified(poly({-3, 2}), 3, 1);
    CHECK(s4.integral_count == 1);
    CHECK(s4.nonintegral_count == 0);
}

TEST_CASE("reverse duality of nonintegral counts") {
    SplitMix64 rng(5150);
    int checked = 0;
    while (checked < 60) {
        int d = 2 + static_cast<int>(rng.below(4));
        std::vector<BigInt> c(static_cast<std::size_t>(d) + 1);
        for (auto& v : c) v = static_cast<long>(rng.below(9)) - 4;
        IntPoly f(std::move(c));
        if (f.degree() < 2 || sign(f.constant_term()) == 0) continue;
        if (sign(discriminant(f)) == 0) continue;
        for (std::uint64_t p : {2ull, 3ull}) {
            for (unsigned lvl : {1u, 2u}) {
                auto sf = count_roots_unramified(f, p, lvl);
                auto sr = count_roots_unramified(f.reversed(), p, lvl);
                auto zero = fq_ops::zero(*sr.field);
                unsigned res0 = sr.residue_histogram.count(zero) ? sr.residue_histogram.at(zero) : 0;
                CAPTURE(f.to_string());
                CHECK(sf.nonintegral_count == res0);
            }
        }
        ++checked;
    }
}

TEST_CASE("subfield partition worked examples") {
    auto prof1 = local_profile(poly({1, 0, 1}), 3, 2); // x^2+1 at p=3
    CHECK(prof1.exact_generator_counts.at(1) == 0);
    CHECK(prof1.exact_generator_counts.at(2) == 2);
    CHECK(prof1.unaccounted_count == 0);
    CHECK_FALSE(prof1.ramified_or_deep);

    auto prof2 = local_profile(poly({-1, 0, 1}), 3, 2); // x^2-1: both roots rational
    CHECK(prof2.exact_generator_counts.at(1) == 2);
    CHECK(prof2.exact_generator_counts.at(2) == 0);

    // (x-1)(x^2+1): combined counting
    auto prof3 = local_profile(poly({-1, 1}) * poly({1, 0, 1}), 3, 2);
    CHECK(prof3.exact_generator_counts.at(1) == 1);
    CHECK(prof3.exact_generator_counts.at(2) == 2);
    CHECK(prof3.unaccounted_count == 0);

    // exact-generator histogram at level 2 excludes the embedded level-1 root
    const auto& h2 = prof3.exact_generator_histograms.at(2);
    unsigned total2 = 0;
    for (const auto& [res, n] : h2) total2 += n;
    CHECK(total2 == 2);
    CHECK(prof3.exact_generator_histograms.at(1).size() == 1);
}

TEST_CASE("local profiles flag ramified leftovers") {
    auto prof1 = local_profile(poly({-1, -1, 1}), 5, 3); // disc 5: ramified quadratic
    CHECK(prof1.level(1).membership_count == 0);
    CHECK(prof1.level(2).membership_count == 0);
    CHECK(prof1.level(3).membership_count == 0);
    CHECK(prof1.unaccounted_count == 2);
    CHECK(prof1.ramified_or_deep);
    CHECK(prof1.ord_p_disc == 1);

    auto prof2 = local_profile(poly({1, 0, 0, 0, 1}), 2, 2); // x^4+1 at p=2
    CHECK(prof2.level(1).membership_count == 0);
    CHECK(prof2.level(2).membership_count == 0);
    CHECK(prof2.unaccounted_count == 4);
    CHECK(prof2.ramified_or_deep);

    auto prof3 = local_profile(poly({-2, 0, 1}), 2, 3); // x^2-2: fractional slope
    CHECK(prof3.ramified_or_deep);
    CHECK(prof3.polygon.has_fractional_slope());

    CHECK_THROWS_AS((void)local_profile(poly({1, 1, 1, 1, 1}), 3, 4), unsupported_level);
}

TEST_CASE("planted-root oracle: constructed instances match exactly") {
    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
        SplitMix64 rng(1000 + p);
        for (int iter = 0; iter < 67; ++iter) {
            auto inst = reference::make_planted_instance(p, rng);
            auto st = count_roots_unramified(inst.poly, p, 1);
            CAPTURE(inst.poly.to_string());
            CAPTURE(p);
            CHECK(st.integral_count == inst.expected_integral);
            for (const auto& [res, n] : inst.expected_residues)
                CHECK(histogram_at(st, res) == n);
        }
    }
}

TEST_CASE("naive-lifting oracle: branch tree agrees on random squarefree instances") {
    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
        SplitMix64 rng(777 * p);
        int done = 0;
        while (done < 40) {
            int d = 2 + static_cast<int>(rng.below(4));
            std::vector<BigInt> c(static_cast<std::size_t>(d) + 1);
            for (auto& v : c) v = static_cast<long>(rng.below(13)) - 6;
            IntPoly f(std::move(c));
            if (f.degree() < 2 || sign(f.constant_term()) == 0) continue;
            if (sign(discriminant(f)) == 0) continue;
            auto st = count_roots_unramified(f, p, 1);
            auto tree = reference::zp_branch_tree_count(f, p);
            CAPTURE(f.to_string());
            CAPTURE(p);
            CHECK(st.integral_count == tree.total);
            for (const auto& [res, n] : tree.per_residue) CHECK(histogram_at(st, res) == n);
            ++done;
        }
    }
}

TEST_CASE("partition consistency and membership monotonicity over an enumeration") {
    for (std::uint64_t p : {2ull, 3ull}) {
        for_each_poly(3, 2, [&](const IntPoly& f) {
            if (f.degree() < 1 || sign(f.constant_term()) == 0) return;
            if (sign(discriminant(f)) == 0) return;
            auto prof = local_profile(f, p, 3);
            unsigned gen_total = 0;
            for (const auto& [lvl, n] : prof.exact_generator_counts) gen_total += n;
            CHECK(gen_total + prof.unaccounted_count == static_cast<unsigned>(f.degree()));
            CHECK(prof.level(1).membership_count <= prof.level(2).membership_count);
            CHECK(prof.level(1).membership_count <= prof.level(3).membership_count);
            CHECK(prof.level(1).max_recursion_depth <= prof.ord_p_disc + 1);
        });
    }
}
