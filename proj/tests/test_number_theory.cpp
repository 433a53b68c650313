#include <gtest/gtest.h>

#include "hypergeom/congruence.hpp"
#include "hypergeom/number_theory.hpp"

using namespace hgm;

TEST(Factor, SmallAndLarge) {
    EXPECT_EQ(format_factorization(factor_u64(1451520)), "2^9*3^4*5*7");
    EXPECT_EQ(format_factorization(factor_u64(1)), "1");
    Integer n = Integer("1000000007") * Integer("998244353") * 4;
    FactorResult r = factor(n);
    ASSERT_TRUE(r.complete());
    EXPECT_EQ(format_factorization(r.primes), "2^2*998244353*1000000007");
}

TEST(Factor, ParseRoundTrip) {
    for (const char* s : {"1", "2^3*3^5*5*7^2*13", "2^15*3^6*5^2*7^22*19*43"})
        EXPECT_EQ(format_factorization(parse_factorization(s)), s);
    EXPECT_EQ(evaluate(parse_factorization("2^5*3^2")), 288);
}

TEST(Factor, PrimesAgreeWithSieve) {
    auto ps = primes_up_to(1000);
    for (std::uint64_t k = 2; k < 1000; ++k)
        EXPECT_EQ(is_prime_u64(k), std::binary_search(ps.begin(), ps.end(), static_cast<std::uint32_t>(k))) << k;
}

// Brute-force count of 4x4 matrices over F_2 preserving J.
TEST(SpOrder, BruteForceSp4Mod2) {
    int count = 0;
    for (std::uint32_t bits = 0; bits < (1u << 16); ++bits) {
        int a[4][4];
        for (int k = 0; k < 16; ++k) a[k / 4][k % 4] = (bits >> k) & 1;
        const int J[4][4] = {{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}};
        bool ok = true;
        for (int i = 0; i < 4 && ok; ++i)
            for (int j = 0; j < 4 && ok; ++j) {
                int s = 0;
                for (int k = 0; k < 4; ++k)
                    for (int l = 0; l < 4; ++l) s += a[i][k] * J[k][l] * a[j][l];
                ok = s % 2 == J[i][j];
            }
        count += ok;
    }
    EXPECT_EQ(count, 720);
    EXPECT_EQ(sp_order(4, 2), 720);
}

TEST(SpOrder, Formula) {
    EXPECT_EQ(sp_order(6, 2), 1451520);
    EXPECT_EQ(sp_order(4, 4), Integer(720) * 1024);
    EXPECT_EQ(sp_order(2, 5), 120);
    EXPECT_EQ(sp_order(4, 1), 1);
    EXPECT_EQ(sp_order(4, 6), Integer(720) * 51840);
}

// {1 + 2X mod 4 : XJ + JX^T = 0 mod 2} in degree 4.
TEST(SpOrder, KernelMod4) {
    int count = 0;
    for (std::uint32_t bits = 0; bits < (1u << 16); ++bits) {
        int x[4][4];
        for (int k = 0; k < 16; ++k) x[k / 4][k % 4] = (bits >> k) & 1;
        const int J[4][4] = {{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}};
        bool ok = true;
        for (int i = 0; i < 4 && ok; ++i)
            for (int j = 0; j < 4 && ok; ++j) {
                int s = 0;
                for (int k = 0; k < 4; ++k) s += x[i][k] * J[k][j] + J[i][k] * x[j][k];
                ok = s % 2 == 0;
            }
        count += ok;
    }
    EXPECT_EQ(count, 1 << 10);
    EXPECT_EQ(evaluate(divide(sp_order_factored(4, factor_u64(4)), sp_order_factored(4, factor_u64(2)))), 1 << 10);
}
