#include <iostream>
#include <random>

#include "hypergeom/words.hpp"

int main() {
    using namespace hgm;
    StandardGenerators S(4);
    std::mt19937_64 rng(7);
    std::vector<Letter> letters;
    for (int i = 0; i < 30; ++i) letters.push_back({rng() % S.size(), Integer(rng() % 2 ? 1 : -1)});
    IntMatrix g = evaluate(S, letters);
    SymplecticWord w = express(S, g);
    std::cout << "g =\n" << g << "\nword (" << w.letters.size() << " letters): " << w.to_string() << '\n';
    std::cout << (evaluate(S, w.letters) == g ? "round trip ok" : "round trip FAILED") << '\n';
    export_words(std::cout, S, {w});
}
