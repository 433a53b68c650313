#include <gtest/gtest.h>

#include <map>

#include "hypergeom/density.hpp"
#include "hypergeom/form.hpp"
#include "hypergeom/zpoints.hpp"
#include "table_rows.hpp"

using namespace hgm;

namespace {

/// Size of the group generated by gens if it has at most `cap` elements, else 0.
std::size_t finite_order(const std::vector<RatMatrix>& gens, std::size_t cap) {
    std::map<std::string, bool> seen;
    auto key = [](const RatMatrix& m) {
        std::string s;
        for (const auto& q : m.data()) s += q.get_str() + ",";
        return s;
    };
    std::vector<RatMatrix> queue{RatMatrix::identity(gens.front().rows())};
    seen[key(queue[0])] = true;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        for (const auto& g : gens) {
            RatMatrix x = queue[i] * g;
            if (seen.emplace(key(x), true).second) queue.push_back(std::move(x));
            if (queue.size() > cap) return 0;
        }
    }
    return queue.size();
}

}  // namespace

TEST(Density, TableRowsAreDense) {
    for (const auto& row : hgm_test::table_rows()) {
        HypergroupData H = build_group(parse_pair(row.pair));
        DensityCertificate c = is_dense(H.generators(), H.h_1);
        EXPECT_TRUE(c.dense) << row.nr;
        EXPECT_EQ(c.dimension, 36u);
        EXPECT_EQ(c.basis.size(), 36u);
    }
}

TEST(Density, DegreeFourPairs) {
    for (const char* p : {"C1^4 | C5", "C1^4 | C10"}) {
        HypergroupData H = build_group(parse_pair(p));
        EXPECT_TRUE(is_dense(H.generators(), H.h_1).dense) << p;
        EXPECT_EQ(finite_order(H.generators(), 5000), 0u) << p;
    }
}

TEST(Density, ImprimitiveGroupIsNotDense) {
    // f(t) = F(t^2), g(t) = G(t^2): with D = diag(1,-1,1,-1) every generator satisfies
    // D x D = -x and D h_1 D = h_1, so the normal closure of h_1 commutes with D and
    // spans at most the 8-dimensional commutant.
    HypergroupData H = build_group(parse_pair("C8 | C12"));
    RatMatrix D(4, 4);
    for (std::size_t i = 0; i < 4; ++i) D(i, i) = i % 2 ? -1 : 1;
    for (const auto& g : H.generators()) ASSERT_EQ(D * g * D, Rational(-1) * g);
    ASSERT_EQ(D * H.h_1 * D, H.h_1);
    DensityCertificate c = is_dense(H.generators(), H.h_1);
    EXPECT_FALSE(c.dense);
    EXPECT_LE(c.dimension, 8u);
}

TEST(Density, DenseInvariantUnderBaseChange) {
    for (const auto& row : hgm_test::table_rows()) {
        HypergroupData H = build_group(parse_pair(row.pair));
        FormData fd = normalize_group(H);
        EXPECT_EQ(is_dense(fd.L_generators, fd.h).dense, is_dense(H.generators(), H.h_1).dense);
    }
}

TEST(Density, RejectsNonTransvection) {
    HypergroupData H = build_group(parse_pair("C1^4 | C5"));
    EXPECT_THROW(is_dense(H.generators(), H.h_inf), Error);
}

TEST(Density, SurjectivityMatchesLevel) {
    // Level 2 for 437: proper image mod 2; level 1 for 468: full image mod 2 and 3.
    {
        HypergroupData H = build_group(parse_pair("C7 | C2^2*C3^2"));
        FormData fd = normalize_group(H);
        EXPECT_FALSE(surjective_mod_p(fd.L_generators, fd.h, 2));
    }
    {
        HypergroupData H = build_group(parse_pair("C14 | C3*C5"));
        FormData fd = normalize_group(H);
        EXPECT_TRUE(surjective_mod_p(fd.L_generators, fd.h, 2));
        EXPECT_TRUE(surjective_mod_p(fd.L_generators, fd.h, 3));
        DensityCertificate c = is_dense(fd.L_generators, fd.h);
        auto Pi1 = candidate_primes(c);
        Integer lk;
        RatMatrix lambda = integral_transvection(fd.h, lk);
        EXPECT_TRUE(exceptional_primes(fd.L_generators, lambda, Pi1).empty());
    }
}

TEST(Density, AlgebraDimensionModP) {
    // Full image mod p forces an absolutely irreducible normal closure.
    for (const char* pair : {"C1^4 | C5", "C1^4 | C10", "C2^4 | C3^2"}) {
        HypergroupData H = build_group(parse_pair(pair));
        FormData fd = normalize_group(H);
        for (std::uint64_t p : {5u, 7u, 11u}) {
            if (denominator_mu(fd.L_generators) % p == 0) continue;
            SurjectivityOptions opt;
            opt.chain_vectors = 1'000'000'000;
            if (surjective_mod_p(fd.L_generators, fd.h, p, opt)) {
                EXPECT_EQ(algebra_dimension_mod_p(fd.L_generators, fd.h, p), 16u) << pair << " p=" << p;
            }
        }
    }
}
