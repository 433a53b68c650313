#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "hypergeom/matrix.hpp"

using namespace hgm;

namespace {

IntMatrix random_int(std::size_t r, std::size_t c, std::mt19937_64& rng, int bound = 5) {
    std::uniform_int_distribution<int> d(-bound, bound);
    IntMatrix m(r, c);
    for (auto& x : m.data()) x = d(rng);
    return m;
}

// Leibniz expansion.
Integer leibniz(const IntMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    Integer total = 0;
    do {
        int inv = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) inv += p[i] > p[j];
        Integer term = inv % 2 ? -1 : 1;
        for (std::size_t i = 0; i < n; ++i) term *= m(i, p[i]);
        total += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

IntMatrix random_unimodular(std::size_t n, std::mt19937_64& rng) {
    IntMatrix u = IntMatrix::identity(n);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int s = 0; s < 12; ++s) {
        std::size_t a = pick(rng), b = pick(rng);
        if (a == b) continue;
        const int sign = rng() % 2 ? 1 : -1;
        for (std::size_t j = 0; j < n; ++j) u(a, j) += sign * u(b, j);
    }
    return u;
}

}  // namespace

TEST(Matrix, DeterminantMatchesLeibniz) {
    std::mt19937_64 rng(11);
    for (std::size_t n = 1; n <= 6; ++n)
        for (int t = 0; t < 10; ++t) {
            IntMatrix m = random_int(n, n, rng);
            EXPECT_EQ(determinant(m), leibniz(m));
            EXPECT_EQ(determinant(to_rational(m)), Rational(leibniz(m)));
        }
}

TEST(Matrix, InverseIsTwoSided) {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 20; ++t) {
        RatMatrix m = to_rational(random_int(5, 5, rng));
        auto inv = try_inverse(m);
        if (!inv) {
            EXPECT_EQ(determinant(m), 0);
            continue;
        }
        EXPECT_TRUE((m * *inv).is_identity());
        EXPECT_TRUE((*inv * m).is_identity());
    }
}

TEST(Matrix, KernelAndRank) {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 20; ++t) {
        IntMatrix a = random_int(3, 6, rng, 3);
        RatMatrix m = to_rational(a);
        auto ker = rational_kernel(m);
        EXPECT_EQ(ker.size() + rank(m), 6u);
        for (const auto& v : ker) {
            EXPECT_EQ(content(v), 1);
            for (std::size_t i = 0; i < 3; ++i) {
                Integer s = 0;
                for (std::size_t j = 0; j < 6; ++j) s += a(i, j) * v[j];
                EXPECT_EQ(s, 0);
            }
        }
    }
}

TEST(Matrix, HermiteFormIsCanonical) {
    std::mt19937_64 rng(14);
    for (int t = 0; t < 30; ++t) {
        IntMatrix m = random_int(4, 4, rng, 6);
        if (determinant(m) == 0) continue;
        IntMatrix h = hermite_normal_form(m);
        EXPECT_EQ(h, hermite_normal_form(random_unimodular(4, rng) * m));
        EXPECT_EQ(abs(determinant(h)), abs(determinant(m)));
        for (std::size_t i = 0; i < 4; ++i) {
            EXPECT_GT(h(i, i), 0);
            for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(h(i, j), 0);
            for (std::size_t k = 0; k < i; ++k) {
                EXPECT_GE(h(k, i), 0);
                EXPECT_LT(h(k, i), h(i, i));
            }
        }
    }
}

TEST(Matrix, SpansOverQAndFp) {
    RationalSpan span(3);
    EXPECT_TRUE(span.add({Rational(1), Rational(2), Rational(3)}));
    EXPECT_FALSE(span.add({Rational(2), Rational(4), Rational(6)}));
    EXPECT_TRUE(span.add({Rational(0), Rational(1), Rational(1, 2)}));
    EXPECT_EQ(span.size(), 2u);
    // Dependent mod 3 only.
    std::vector<RatVector> vs{{Rational(1), Rational(0)}, {Rational(1), Rational(3)}};
    EXPECT_EQ(span_dimension(vs, Field{0}), 2u);
    EXPECT_EQ(span_dimension(vs, Field{3}), 1u);
}

TEST(Matrix, StandardForm) {
    RatMatrix J = standard_form(4);
    EXPECT_TRUE((J * J + RatMatrix::identity(4)).is_zero());
    EXPECT_EQ(J.transpose(), -J);
}
