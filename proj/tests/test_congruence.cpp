#include <gtest/gtest.h>

#include <random>
#include <unordered_set>

#include "hypergeom/congruence.hpp"
#include "hypergeom/words.hpp"

using namespace hgm;

namespace {

/// Order of <gens> by breadth-first closure.
std::size_t brute_order(const std::vector<ModMatrix>& gens) {
    std::unordered_set<ModMatrix, ModMatrixHash> seen;
    std::vector<ModMatrix> queue{ModMatrix::identity(gens.front().dim(), gens.front().modulus())};
    seen.insert(queue[0]);
    for (std::size_t i = 0; i < queue.size(); ++i)
        for (const auto& g : gens) {
            ModMatrix x = queue[i] * g;
            if (seen.insert(x).second) queue.push_back(x);
        }
    return queue.size();
}

IntMatrix random_symplectic(const StandardGenerators& S, std::mt19937_64& rng, std::size_t max_len) {
    std::vector<Letter> w;
    const std::size_t len = 1 + rng() % max_len;
    for (std::size_t i = 0; i < len; ++i) w.push_back({rng() % S.size(), Integer(rng() % 2 ? 1 : -1)});
    return evaluate(S, w);
}

std::vector<IntMatrix> standard_matrices(const StandardGenerators& S) {
    std::vector<IntMatrix> out;
    for (std::size_t k = 0; k < S.size(); ++k) out.push_back(S.matrix(k, 1));
    return out;
}

}  // namespace

TEST(Congruence, SpOrderFormula) {
    EXPECT_EQ(sp_order(4, 2), 720);
    EXPECT_EQ(sp_order(4, 3), 51840);
    EXPECT_EQ(sp_order(2, 4), 48);
    EXPECT_EQ(sp_order(4, 4), 720 * 1024);
}

// Random subgroups of Sp(4,2) and Sp(4,3): chain order equals the closure.
TEST(Congruence, ChainMatchesBruteForce) {
    std::mt19937_64 rng(11);
    StandardGenerators S(4);
    for (std::uint64_t p : {2u, 3u}) {
        for (int t = 0; t < 20; ++t) {
            std::vector<ModMatrix> gens;
            const int k = 1 + static_cast<int>(rng() % 3);
            for (int i = 0; i < k; ++i) gens.push_back(ModMatrix::reduce(random_symplectic(S, rng, 12), p));
            StabilizerChain ch(gens, p);
            EXPECT_EQ(ch.order(), brute_order(gens)) << "p=" << p << " trial " << t;
        }
    }
}

TEST(Congruence, ChainMembership) {
    std::mt19937_64 rng(3);
    StandardGenerators S(4);
    std::vector<ModMatrix> gens{ModMatrix::reduce(S.matrix(0, 1), 3), ModMatrix::reduce(S.matrix(2, 1), 3)};
    StabilizerChain ch(gens, 3);
    std::unordered_set<ModMatrix, ModMatrixHash> all;
    std::vector<ModMatrix> q{ModMatrix::identity(4, 3)};
    all.insert(q[0]);
    for (std::size_t i = 0; i < q.size(); ++i)
        for (const auto& g : gens)
            if (all.insert(q[i] * g).second) q.push_back(q[i] * g);
    for (int t = 0; t < 200; ++t) {
        ModMatrix x = ModMatrix::reduce(random_symplectic(S, rng, 20), 3);
        EXPECT_EQ(ch.contains(x), all.count(x) > 0);
    }
}

TEST(Congruence, KernelModFourHasOrderTwoToTen) {
    StandardGenerators S(4);
    CongruenceImage img(standard_matrices(S), PrimePowers{{Integer(2), 2}});
    EXPECT_EQ(img.order(), sp_order(4, 4));
    EXPECT_EQ(img.pgroup(2)->layer_dim(1), 10u);
}

// Subgroups of Sp(n, Z/M) with prime-power layers against brute-force closure.
TEST(Congruence, ImageMatchesBruteForce) {
    std::mt19937_64 rng(5);
    struct Case {
        std::size_t n;
        std::uint64_t m;
        PrimePowers f;
    };
    const std::vector<Case> cases{{2, 8, {{2, 3}}}, {2, 9, {{3, 2}}}, {2, 27, {{3, 3}}}, {2, 36, {{2, 2}, {3, 2}}}, {4, 4, {{2, 2}}}};
    for (const auto& c : cases) {
        StandardGenerators S(c.n);
        for (int t = 0; t < 6; ++t) {
            std::vector<IntMatrix> gens;
            const int k = 1 + static_cast<int>(rng() % 2);
            for (int i = 0; i < k; ++i) gens.push_back(random_symplectic(S, rng, 10));
            std::vector<ModMatrix> red;
            for (const auto& g : gens) red.push_back(ModMatrix::reduce(g, c.m));
            CongruenceImage img(gens, c.f);
            EXPECT_EQ(img.order(), brute_order(red)) << "n=" << c.n << " M=" << c.m << " trial " << t;
            for (int s = 0; s < 20; ++s) {
                IntMatrix x = gens[rng() % gens.size()];
                for (int r = 0; r < 4; ++r) x = x * gens[rng() % gens.size()];
                EXPECT_TRUE(img.contains(x));
            }
        }
    }
}

TEST(Congruence, LevelOfFullGroupIsOne) {
    StandardGenerators S(4);
    ClosureReport r = closure_level_and_index(standard_matrices(S), {});
    EXPECT_TRUE(r.level.empty());
    EXPECT_TRUE(r.index.empty());
}

TEST(Congruence, LevelOfPreimageOfModTwoSubgroup) {
    // <lifts of H, squared transvections> has closure the preimage of H under
    // reduction mod 2, so level 2 and index |Sp(4,2)| / |H|.
    StandardGenerators S(4);
    const IntMatrix J = standard_form<Integer>(4);
    std::vector<IntMatrix> sq;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i; j < 4; ++j) {
            IntMatrix v(1, 4);
            v(0, i) = 1;
            v(0, j) = 1;
            const IntMatrix t = IntMatrix::identity(4) + J * v.transpose() * v;
            sq.push_back(t * t);
        }
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<IntMatrix> gens = sq;
        std::vector<ModMatrix> h;
        for (int k = 0; k < 2; ++k) {
            gens.push_back(random_symplectic(S, rng, 8));
            h.push_back(ModMatrix::reduce(gens.back(), 2));
        }
        const std::size_t order = brute_order(h);
        ClosureReport r = closure_level_and_index(gens, {});
        if (order == 720) {
            EXPECT_TRUE(r.level.empty());
            continue;
        }
        EXPECT_EQ(r.level, (PrimePowers{{Integer(2), 1}}));
        EXPECT_EQ(evaluate(r.index), 720 / static_cast<long>(order));
    }
}

TEST(Congruence, DeadlineThrowsBudgetError) {
    StandardGenerators S(6);
    ChainOptions opt;
    opt.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
    std::vector<ModMatrix> gens;
    for (std::size_t k = 0; k < S.size(); ++k) gens.push_back(ModMatrix::reduce(S.matrix(k, 1), 7));
    try {
        StabilizerChain ch(gens, 7, opt);
        FAIL() << "expected a budget error";
    } catch (const Error& e) {
        EXPECT_TRUE(is_budget_error(e.code()));
    }
}
