#include <gtest/gtest.h>

#include <random>

#include "hypergeom/congruence.hpp"
#include "hypergeom/words.hpp"
#include "hypergeom/zpoints.hpp"

using namespace hgm;

namespace {

struct Conjugate {
    std::vector<RatMatrix> gens;
    RatMatrix h;
    std::set<Integer> primes;
};

/// c Gamma c^{-1} with Gamma = Sp(n,Z) and c = diag(d, 1/d) times an integral symplectic matrix.
Conjugate random_conjugate(std::size_t n, std::mt19937_64& rng) {
    StandardGenerators S(n);
    const std::size_t s = n / 2;
    RatMatrix D = RatMatrix::identity(n);
    Conjugate out;
    for (std::size_t i = 0; i < s; ++i) {
        const long d = 1 + static_cast<long>(rng() % 3);
        D(i, i) = Rational(d);
        D(s + i, s + i) = make_rational(1, d);
        if (d > 1) out.primes.insert(Integer(d));
    }
    std::vector<Letter> w;
    for (int i = 0; i < 6; ++i) w.push_back({rng() % S.size(), Integer(rng() % 2 ? 1 : -1)});
    const RatMatrix c = D * to_rational(evaluate(S, w));
    const RatMatrix ci = inverse(c);
    for (std::size_t k = 0; k < S.size(); ++k) out.gens.push_back(c * to_rational(S.matrix(k, 1)) * ci);
    out.h = c * to_rational(S.matrix(0, 1)) * ci;
    return out;
}

/// Index of Gamma_0(N) in SL(2,Z).
long psi(long N) {
    long r = N;
    for (long p = 2; p <= N; ++p) {
        bool prime = true;
        for (long q = 2; q * q <= p; ++q) prime = prime && p % q != 0;
        if (prime && N % p == 0) r = r / p * (p + 1);
    }
    return r;
}

}  // namespace

TEST(ZPoints, LatticeOperations) {
    const Lattice z = Lattice::standard(3);
    EXPECT_EQ(z.dual(), z);
    EXPECT_EQ(intersect(z, z.scaled(Rational(2))), z.scaled(Rational(2)));
    EXPECT_EQ(z + z.scaled(make_rational(1, 3)), z.scaled(make_rational(1, 3)));
}

TEST(ZPoints, SLTwoConjugateIndexIsPsi) {
    for (long d : {2L, 3L, 6L}) {
        RatMatrix c(2, 2);
        c(0, 0) = Rational(d);
        c(1, 1) = make_rational(1, d);
        const RatMatrix ci = inverse(c);
        StandardGenerators S(2);
        std::vector<RatMatrix> gens;
        for (std::size_t k = 0; k < S.size(); ++k) gens.push_back(c * to_rational(S.matrix(k, 1)) * ci);
        IntegerPointsData zp = integer_points(gens, c * to_rational(S.matrix(0, 1)) * ci);
        EXPECT_EQ(zp.index, psi(d * d)) << d;
        EXPECT_EQ(single_stage_index(gens), psi(d * d)) << d;
    }
}

// Fifty randomized conjugates: integral symplectic generators, verified mod the level,
// and two-stage index equal to the single-stage one.
TEST(ZPoints, RandomConjugatesRoundTrip) {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = t % 2 ? 4 : 2;
        Conjugate cj = random_conjugate(n, rng);
        ZPointsOptions opt;
        opt.seed = 1 + t;
        IntegerPointsData zp = integer_points(cj.gens, cj.h, opt);
        const IntMatrix J = standard_form<Integer>(n);
        for (const auto& g : zp.LZ_generators) {
            ASSERT_TRUE(is_integral(g.m));
            const IntMatrix z = to_integer(g.m);
            EXPECT_EQ(z * J * z.transpose(), J);
        }
        EXPECT_EQ(zp.index, single_stage_index(cj.gens)) << "trial " << t;
        ClosureReport cl = closure_level_and_index(zp.integer_generators(), cj.primes);
        EXPECT_TRUE(verify_zpoints(zp, cl.level)) << "trial " << t;
        EXPECT_TRUE(zp.verified);
        ++checked;
    }
    EXPECT_EQ(checked, 50);
}

TEST(ZPoints, IntegralityScaleRejectsNonIntegralGroup) {
    RatMatrix a = RatMatrix::identity(2);
    a(0, 1) = 1;
    RatMatrix b = RatMatrix::identity(2);
    b(1, 0) = make_rational(1, 2);
    // <[[1,1],[0,1]], [[1,0],[1/2,1]]> is not discrete.
    EXPECT_THROW(integrality_scale({a, b}), Error);
}

TEST(ZPoints, WordsOfTransversalEvaluate) {
    std::mt19937_64 rng(4);
    Conjugate cj = random_conjugate(4, rng);
    IntegerPointsData zp = integer_points(cj.gens, cj.h);
    std::vector<RatMatrix> all = cj.gens;
    for (const auto& t : zp.transversal_K_over_LZ) {
        RatMatrix x = RatMatrix::identity(4);
        for (int l : t.w) x = x * (l > 0 ? all[l - 1] : inverse(all[-l - 1]));
        EXPECT_EQ(x, t.m);
    }
}
