#include <gtest/gtest.h>

#include "hypergeom/construct.hpp"
#include "table_rows.hpp"

using namespace hgm;

namespace {

IntPoly poly(std::vector<long> c) {
    std::vector<Integer> z;
    for (long v : c) z.emplace_back(v);
    return IntPoly(std::move(z));
}

}  // namespace

TEST(Construct, ParseFormatRoundTrip) {
    for (const auto& row : hgm_test::table_rows()) {
        PolyPair p = parse_pair(row.pair);
        EXPECT_EQ(p.canonical(), row.pair);
        EXPECT_EQ(p.n, 6u);
        EXPECT_TRUE(p.delta_is_one);
    }
    EXPECT_EQ(parse_pair(" c4^2 * c6|C10*C3 ").canonical(), "C4^2*C6 | C3*C10");
    EXPECT_THROW(parse_pair("C1^6"), Error);
    EXPECT_THROW(parse_pair("C1^6 | X7"), Error);
    EXPECT_THROW(parse_pair("C1^6 | C1*C7"), Error);
    EXPECT_THROW(parse_pair("C1^4 | C7"), Error);
}

TEST(Construct, ExpandedPolynomialsMatchTable) {
    // Expanded forms printed in the table.
    EXPECT_EQ(parse_pair("C1^6 | C14").f, poly({1, -6, 15, -20, 15, -6, 1}));
    EXPECT_EQ(parse_pair("C1^6 | C14").g, poly({1, -1, 1, -1, 1, -1, 1}));
    EXPECT_EQ(parse_pair("C1^6 | C18").g, poly({1, 0, 0, -1, 0, 0, 1}));
    EXPECT_EQ(parse_pair("C7 | C2^2*C3^2").f, poly({1, 1, 1, 1, 1, 1, 1}));
}

TEST(Construct, CoeffColumn) {
    for (const auto& row : hgm_test::table_rows()) {
        PolyPair p = parse_pair(row.pair);
        auto [c, sv] = coeff_and_criterion(p);
        EXPECT_EQ(c, row.coeff) << row.nr;
        EXPECT_EQ(sv, row.coeff <= 2) << row.nr;
    }
}

TEST(Construct, CoeffOracle) {
    // Independent oracle: first nonzero coefficient of f - g from the top.
    for (const auto& p : enumerate_pairs(4)) {
        long c = 0;
        for (long i = 4; i >= 0 && c == 0; --i) c = Integer(p.f.coeff(i) - p.g.coeff(i)).get_si();
        EXPECT_EQ(p.coeff, std::labs(c)) << p.canonical();
    }
}

TEST(Construct, OrderedIsTwiceUnordered) {
    for (unsigned n : {2u, 4u, 6u}) {
        const auto u = enumerate_pairs(n, PairConvention::Unordered);
        const auto o = enumerate_pairs(n, PairConvention::Ordered);
        EXPECT_EQ(o.size(), 2 * u.size()) << n;
        for (std::size_t i = 0; i < u.size(); ++i) ASSERT_EQ(*u[i].nr, i + 1);
    }
}

TEST(Construct, EnumerationContainsTableRows) {
    const auto pairs = enumerate_pairs(6);
    std::set<std::string> seen;
    for (const auto& p : pairs) {
        seen.insert(p.canonical());
        EXPECT_EQ(p.f.coeff(0), p.g.coeff(0));
        EXPECT_EQ(p.f.degree(), 6);
    }
    for (const auto& row : hgm_test::table_rows()) {
        PolyPair p = parse_pair(row.pair);
        PolyPair q = make_poly_pair(p.g_factors, p.f_factors);
        EXPECT_TRUE(seen.count(p.canonical()) || seen.count(q.canonical())) << row.pair;
    }
}

TEST(Construct, CompanionHasCharacteristicPolynomial) {
    for (const auto& p : enumerate_pairs(4)) {
        EXPECT_EQ(characteristic_polynomial(companion(p.f)), p.f);
        EXPECT_EQ(characteristic_polynomial(companion(p.g)), p.g);
    }
}

TEST(Construct, BuildGroupGivesTransvection) {
    for (const auto& row : hgm_test::table_rows()) {
        HypergroupData H = build_group(parse_pair(row.pair));
        const RatMatrix I = RatMatrix::identity(6);
        EXPECT_EQ(rank(H.h_1 - I), 1u);
        EXPECT_EQ(determinant(H.h_1), 1);
        EXPECT_EQ(H.h_1 * H.h_0 * H.h_inf, I);
        EXPECT_EQ(characteristic_polynomial(H.h_inf), H.pair.f);
        EXPECT_EQ(characteristic_polynomial(inverse(H.h_0)), H.pair.g);
    }
}
