#include <gtest/gtest.h>

#include <random>

#include "hypergeom/form.hpp"
#include "table_rows.hpp"

using namespace hgm;

TEST(Form, InvariantFormIsFixedAndAlternating) {
    for (const auto& row : hgm_test::table_rows()) {
        HypergroupData H = build_group(parse_pair(row.pair));
        const RatMatrix phi = invariant_form(H);
        EXPECT_EQ(phi.transpose(), Rational(-1) * phi) << row.nr;
        EXPECT_NE(determinant(phi), 0) << row.nr;
        for (const auto& g : H.generators()) EXPECT_EQ(g * phi * g.transpose(), phi) << row.nr;
    }
}

TEST(Form, BasechangeIsSymplectic) {
    for (const auto& row : hgm_test::table_rows()) {
        HypergroupData H = build_group(parse_pair(row.pair));
        const RatMatrix phi = invariant_form(H);
        const RatMatrix g = symplectic_basechange(phi);
        EXPECT_EQ(g * standard_form(6) * g.transpose(), phi) << row.nr;
    }
}

TEST(Form, NormalizedGeneratorsPreserveJ) {
    for (const auto& row : hgm_test::table_rows()) {
        HypergroupData H = build_group(parse_pair(row.pair));
        FormData fd = normalize_group(H);
        const RatMatrix J = standard_form(6);
        EXPECT_EQ(fd.X * fd.Phi * fd.X.transpose(), J);
        for (const auto& l : fd.L_generators) EXPECT_EQ(l * J * l.transpose(), J) << row.nr;
        // kbar is the lcm of the minimal integral powers.
        Integer k = 1;
        for (const auto& l : fd.L_generators) {
            RatMatrix p = l;
            std::uint64_t e = 1;
            while (!is_integral(p)) p = p * l, ++e;
            k = lcm(k, from_u64(e));
        }
        EXPECT_EQ(k, fd.kbar) << row.nr;
    }
}

TEST(Form, KbarOneForRow468) {
    FormData fd = normalize_group(build_group(parse_pair("C14 | C3*C5")));
    EXPECT_EQ(fd.kbar, 1);
}

TEST(Form, SymplecticSmithNormalForm) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> d(-4, 4);
    for (int trial = 0; trial < 40; ++trial) {
        IntMatrix a(6, 6);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = i + 1; j < 6; ++j) {
                a(i, j) = d(rng);
                a(j, i) = -a(i, j);
            }
        if (determinant(a) == 0) continue;
        SymplecticSmith s = symplectic_smith(a);
        EXPECT_EQ(abs(determinant(s.u)), 1);
        IntMatrix expect(6, 6);
        for (std::size_t t = 0; t < 3; ++t) {
            expect(t, 3 + t) = s.d[t];
            expect(3 + t, t) = -s.d[t];
            EXPECT_GT(s.d[t], 0);
            if (t > 0) {
                EXPECT_EQ(s.d[t] % s.d[t - 1], 0);
            }
        }
        EXPECT_EQ(s.u * a * s.u.transpose(), expect);
        // Pfaffian oracle: product of the invariants squared is |det|.
        EXPECT_EQ(s.d[0] * s.d[0] * s.d[1] * s.d[1] * s.d[2] * s.d[2], abs(determinant(a)));
    }
}
