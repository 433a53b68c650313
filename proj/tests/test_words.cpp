#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "hypergeom/words.hpp"

using namespace hgm;

TEST(Words, GeneratorsAreSymplectic) {
    for (std::size_t n : {2u, 4u, 6u, 8u}) {
        StandardGenerators S(n);
        const std::size_t s = n / 2;
        EXPECT_EQ(S.size(), 2 * s + s * (s - 1) + s * (s - 1) / 2);
        for (std::size_t k = 0; k < S.size(); ++k) {
            EXPECT_TRUE(is_symplectic(S.matrix(k, 1)));
            EXPECT_EQ(S.matrix(k, 3) * S.matrix(k, -3), IntMatrix::identity(n));
        }
    }
}

// 100 random words of at most 200 letters in Sp(4,Z) and in Sp(6,Z).
TEST(Words, RoundTrip) {
    std::mt19937_64 rng(5);
    for (std::size_t n : {4u, 6u}) {
        StandardGenerators S(n);
        for (int t = 0; t < 100; ++t) {
            std::vector<Letter> w;
            const std::size_t len = rng() % 201;
            for (std::size_t i = 0; i < len; ++i) w.push_back({rng() % S.size(), Integer(rng() % 2 ? 1 : -1)});
            const IntMatrix g = evaluate(S, w);
            const SymplecticWord e = express(S, g);
            EXPECT_EQ(evaluate(S, e.letters), g) << "n=" << n << " trial " << t;
        }
    }
}

TEST(Words, IdentityIsEmpty) {
    StandardGenerators S(4);
    EXPECT_TRUE(express(S, IntMatrix::identity(4)).letters.empty());
}

TEST(Words, RejectsNonSymplectic) {
    StandardGenerators S(4);
    IntMatrix m = IntMatrix::identity(4);
    m(0, 0) = -1;
    EXPECT_THROW(express(S, m), Error);
}

TEST(Words, ExportFormat) {
    StandardGenerators S(2);
    std::vector<SymplecticWord> words{express(S, IntMatrix::identity(2)), express(S, S.matrix(0, 2))};
    std::ostringstream os;
    export_words(os, S, words);
    const std::string text = os.str();
    EXPECT_NE(text.find("# g1 = 1 1 0 1"), std::string::npos) << text;
    EXPECT_NE(text.find("\n1\n"), std::string::npos) << text;
}
