#include <gtest/gtest.h>

#include "hypergeom/polynomial.hpp"

using namespace hgm;

namespace {

int moebius(std::uint64_t n) {
    int mu = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            mu = -mu;
        }
    return n > 1 ? -mu : mu;
}

IntPoly t_pow_minus_one(std::uint64_t k) { return IntPoly::monomial(k) - IntPoly::constant(1); }

}  // namespace

TEST(Cyclotomic, ProductOverDivisorsIsTkMinusOne) {
    for (std::uint64_t k = 1; k <= 200; ++k) {
        IntPoly prod = IntPoly::constant(1);
        for (std::uint64_t d = 1; d <= k; ++d)
            if (k % d == 0) prod = prod * cyclotomic(d);
        EXPECT_EQ(prod, t_pow_minus_one(k)) << k;
    }
}

// Moebius inversion as an independent construction.
TEST(Cyclotomic, MoebiusFormula) {
    for (std::uint64_t k = 1; k <= 60; ++k) {
        IntPoly num = IntPoly::constant(1), den = IntPoly::constant(1);
        for (std::uint64_t d = 1; d <= k; ++d) {
            if (k % d != 0) continue;
            int mu = moebius(k / d);
            if (mu == 1) num = num * t_pow_minus_one(d);
            if (mu == -1) den = den * t_pow_minus_one(d);
        }
        EXPECT_EQ(num.exact_div(den), cyclotomic(k)) << k;
        EXPECT_EQ(cyclotomic(k).degree(), static_cast<long>(euler_phi(k)));
    }
}

TEST(Cyclotomic, KnownValues) {
    EXPECT_EQ(cyclotomic(1).to_string(), "t-1");
    EXPECT_EQ(cyclotomic(18).to_string(), "t^6-t^3+1");
    EXPECT_EQ(cyclotomic(14).evaluate(1), 1);
    // First cyclotomic polynomial with a coefficient outside {-1,0,1}.
    EXPECT_EQ(cyclotomic(105).coeff(7), -2);
}

TEST(Cyclotomic, Factorization) {
    CyclotomicFactors f{{1, 2}, {2, 2}, {4, 1}};
    auto back = cyclotomic_factorization(cyclotomic_product(f));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, f);
    EXPECT_FALSE(cyclotomic_factorization(IntPoly({Integer(2), Integer(0), Integer(1)})).has_value());
}

TEST(Cyclotomic, IndicesOfBoundedDegree) {
    auto ks = cyclotomic_indices_up_to_degree(6);
    std::vector<std::uint64_t> expect{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 18};
    EXPECT_EQ(ks, expect);
}
