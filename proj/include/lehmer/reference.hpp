#pragma once

// Independent reference computations for the verification suites. These take
// deliberately different algorithmic routes than the main library code so the
// two can check each other.

#include <cstdint>
#include <map>
#include <vector>

#include "lehmer/bigint.hpp"
#include "lehmer/errors.hpp"
#include "lehmer/intpoly.hpp"
#include "lehmer/resultant.hpp"
#include "lehmer/smallfp.hpp"

namespace lehmer::reference {

struct ZpRootCount {
    unsigned total = 0;
    std::map<std::uint64_t, unsigned> per_residue; // residue mod p -> count
};

// Counts roots of a squarefree f in Z_p by a brute-force branch tree over
// residues mod p, p^2, ..., with Newton's criterion as the leaf certificate:
// a branch r mod p^k holds exactly one root once ord f(r) >= k + ord f'(r),
// ord f(r) > 2 ord f'(r) and ord f'(r) < k. The tree must stabilize by depth
// 2 ord_p(disc f) + 1.
inline ZpRootCount zp_branch_tree_count(const IntPoly& f, std::uint64_t p) {
    if (sign(discriminant(f)) == 0)
        throw invalid_input("branch tree oracle requires squarefree input");
    const BigInt bp(static_cast<unsigned long>(p));
    const unsigned kmax = 2 * static_cast<unsigned>(padic_valuation(discriminant(f), bp)) + 1;
    const IntPoly fd = f.derivative();

    struct Node {
        BigInt r;
        unsigned k;
        std::uint64_t top; // residue mod p of the whole branch
    };
    std::vector<Node> nodes;
    BigInt pk = bp;
    for (std::uint64_t m = 0; m < p; ++m) {
        BigInt r(static_cast<unsigned long>(m));
        if (mpz_divisible_p(f.eval(r).get_mpz_t(), pk.get_mpz_t())) nodes.push_back({r, 1, m});
    }

    ZpRootCount out;
    while (!nodes.empty()) {
        std::vector<Node> next;
        for (const Node& node : nodes) {
            BigInt fr = f.eval(node.r);
            BigInt fdr = fd.eval(node.r);
            if (sign(fr) == 0) {
                // exact integer root: certainly one root in this branch, and
                // no second one can coexist below it once f' is a unit there
                if (sign(fdr) != 0) {
                    unsigned long vd = padic_valuation(fdr, bp);
                    if (vd < node.k) {
                        ++out.total;
                        ++out.per_residue[node.top];
                        continue;
                    }
                }
            } else {
                unsigned long vf = padic_valuation(fr, bp);
                unsigned long vd = sign(fdr) == 0 ? vf + node.k + 1 : padic_valuation(fdr, bp);
                if (vd < node.k && vf >= node.k + vd && vf > 2 * vd) {
                    ++out.total;
                    ++out.per_residue[node.top];
                    continue;
                }
            }
            if (node.k + 1 > kmax)
                throw internal_error("branch tree did not stabilize within 2 ord_p(disc) + 1");
            BigInt pk1 = pow_ui(bp, node.k + 1);
            for (std::uint64_t m = 0; m < p; ++m) {
                BigInt child = node.r + pow_ui(bp, node.k) * static_cast<unsigned long>(m);
                BigInt val = f.eval(child) % pk1;
                if (sign(val) == 0) next.push_back({child, node.k + 1, node.top});
            }
        }
        nodes = std::move(next);
    }
    return out;
}

struct PlantedInstance {
    IntPoly poly;
    unsigned expected_integral = 0;                       // level-1 count
    std::map<std::uint64_t, unsigned> expected_residues;  // multiset {a_i mod p}
};

// f = prod (x - a_i) * g with distinct small integers a_i and g irreducible
// mod p of degree >= 2, so the level-1 statistics are known by construction.
inline PlantedInstance make_planted_instance(std::uint64_t p, SplitMix64& rng) {
    PlantedInstance inst;
    const unsigned nroots = 1 + static_cast<unsigned>(rng.below(3));
    std::vector<long> roots;
    while (roots.size() < nroots) {
        long a = static_cast<long>(rng.below(13)) - 6;
        if (a == 0) continue; // keep a_0 nonzero
        bool dup = false;
        for (long b : roots) dup |= (b == a);
        if (!dup) roots.push_back(a);
    }

    IntPoly g;
    for (;;) {
        unsigned dg = 2 + static_cast<unsigned>(rng.below(2));
        std::vector<BigInt> c(dg + 1);
        for (auto& v : c) v = static_cast<long>(rng.below(2 * p + 3)) - static_cast<long>(p + 1);
        c[dg] = 1;
        if (sign(c[0]) == 0) c[0] = 1;
        IntPoly cand(std::move(c));
        if (fp::is_irreducible(fp::reduce(cand, p), p)) {
            g = cand;
            break;
        }
    }

    IntPoly f = g;
    for (long a : roots) f = f * IntPoly({-a, 1});
    inst.poly = f;
    inst.expected_integral = nroots;
    for (long a : roots) {
        long m = a % static_cast<long>(p);
        if (m < 0) m += static_cast<long>(p);
        ++inst.expected_residues[static_cast<std::uint64_t>(m)];
    }
    return inst;
}

} // namespace lehmer::reference
