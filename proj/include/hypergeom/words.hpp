#pragma once

#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hypergeom/matrix.hpp"

namespace hgm {

/// Elementary symplectic generators of Sp(2s,Z) for J = [[0,1],[-1,0]]:
/// X_i = [[1,E_ii],[0,1]], Y_i = [[1,0],[E_ii,1]], U_ij = diag(1+E_ij, 1-E_ji)
/// for i != j and V_ij = [[1,E_ij+E_ji],[0,1]] for i < j, in that order.
class StandardGenerators {
public:
    enum class Kind { X, Y, U, V };
    struct Gen {
        Kind kind;
        std::size_t i, j;
    };

    explicit StandardGenerators(std::size_t n) : n_(n), s_(n / 2) {
        if (n % 2 != 0 || n == 0) throw Error(ErrorCode::UnsupportedDegree, "symplectic dimension must be even");
        for (std::size_t i = 0; i < s_; ++i) gens_.push_back({Kind::X, i, i});
        for (std::size_t i = 0; i < s_; ++i) gens_.push_back({Kind::Y, i, i});
        for (std::size_t i = 0; i < s_; ++i)
            for (std::size_t j = 0; j < s_; ++j)
                if (i != j) gens_.push_back({Kind::U, i, j});
        for (std::size_t i = 0; i < s_; ++i)
            for (std::size_t j = i + 1; j < s_; ++j) gens_.push_back({Kind::V, i, j});
    }

    std::size_t dim() const { return n_; }
    std::size_t size() const { return gens_.size(); }
    const Gen& gen(std::size_t k) const { return gens_.at(k); }

    std::size_t index_of(Kind kind, std::size_t i, std::size_t j) const {
        for (std::size_t k = 0; k < gens_.size(); ++k)
            if (gens_[k].kind == kind && gens_[k].i == i && gens_[k].j == j) return k;
        throw Error(ErrorCode::InvalidArgument, "no such standard generator");
    }

    /// Left multiplication of g by generator k raised to e, as row operations.
    void left_apply(IntMatrix& g, std::size_t k, Integer e) const {
        const Gen& G = gens_.at(k);
        auto addrow = [&](std::size_t dst, std::size_t src, const Integer& c) {
            for (std::size_t col = 0; col < g.cols(); ++col) g(dst, col) += c * g(src, col);
        };
        switch (G.kind) {
        case Kind::X: addrow(G.i, s_ + G.i, e); break;
        case Kind::Y: addrow(s_ + G.i, G.i, e); break;
        case Kind::U:
            addrow(G.i, G.j, e);
            addrow(s_ + G.j, s_ + G.i, -e);
            break;
        case Kind::V:
            addrow(G.i, s_ + G.j, e);
            addrow(G.j, s_ + G.i, e);
            break;
        }
    }

    IntMatrix matrix(std::size_t k, const Integer& e = 1) const {
        IntMatrix m = IntMatrix::identity(n_);
        left_apply(m, k, e);
        return m;
    }

private:
    std::size_t n_, s_;
    std::vector<Gen> gens_;
};

struct Letter {
    std::size_t gen;  ///< 0-based index into StandardGenerators
    Integer exp;
    friend bool operator==(const Letter&, const Letter&) = default;
};

struct SymplecticWord {
    std::vector<Letter> letters;
    IntMatrix target;

    std::string to_string() const {
        std::string s;
        for (const auto& l : letters) {
            if (!s.empty()) s += ' ';
            s += "g" + std::to_string(l.gen + 1) + "^" + l.exp.get_str();
        }
        return s;
    }
};

inline IntMatrix evaluate(const StandardGenerators& S, const std::vector<Letter>& letters) {
    IntMatrix m = IntMatrix::identity(S.dim());
    // Left-apply from the last letter so that m = L_1 L_2 ... L_r.
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) S.left_apply(m, it->gen, it->exp);
    return m;
}

inline bool is_symplectic(const IntMatrix& g) {
    const IntMatrix J = standard_form<Integer>(g.rows());
    return g * J * g.transpose() == J;
}

/// Symplectic row reduction of g to the identity; the inverse of the
/// reducing word is returned.
inline SymplecticWord express(const StandardGenerators& S, const IntMatrix& g) {
    using K = StandardGenerators::Kind;
    const std::size_t n = S.dim(), s = n / 2;
    if (g.rows() != n || g.cols() != n) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
    if (!is_symplectic(g)) throw Error(ErrorCode::NotSymplectic, "matrix does not preserve J");
    SymplecticWord out;
    out.target = g;
    IntMatrix m = g;
    std::vector<Letter> applied;
    auto op = [&](K kind, std::size_t i, std::size_t j, Integer e) {
        if (e == 0) return;
        const std::size_t k = S.index_of(kind, i, j);
        S.left_apply(m, k, e);
        if (!applied.empty() && applied.back().gen == k) {
            applied.back().exp -= e;
            if (applied.back().exp == 0) applied.pop_back();
        } else {
            applied.push_back({k, Integer(-e)});
        }
    };
    auto tdiv = [](const Integer& a, const Integer& b) {
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return q;
    };

    for (std::size_t k = 0; k < s; ++k) {
        // Column k to e_k.
        for (std::size_t i = k; i < s; ++i) {
            while (m(s + i, k) != 0) {
                if (m(i, k) == 0) {
                    op(K::X, i, i, 1);
                    op(K::Y, i, i, -1);
                    continue;
                }
                if (abs(m(i, k)) >= abs(m(s + i, k))) op(K::X, i, i, -tdiv(m(i, k), m(s + i, k)));
                else op(K::Y, i, i, -tdiv(m(s + i, k), m(i, k)));
            }
        }
        for (;;) {
            std::size_t piv = s;
            for (std::size_t i = k; i < s; ++i)
                if (m(i, k) != 0 && (piv == s || abs(m(i, k)) < abs(m(piv, k)))) piv = i;
            if (piv == s) throw Error(ErrorCode::Internal, "singular column during reduction");
            bool done = true;
            for (std::size_t i = k; i < s; ++i)
                if (i != piv && m(i, k) != 0) {
                    op(K::U, i, piv, -tdiv(m(i, k), m(piv, k)));
                    if (m(i, k) != 0) done = false;
                }
            if (!done) continue;
            if (piv != k) {
                op(K::U, k, piv, 1);
                op(K::U, piv, k, -tdiv(m(piv, k), m(k, k)));
            }
            break;
        }
        if (m(k, k) == -1) {
            op(K::Y, k, k, -1);
            op(K::X, k, k, 2);
            op(K::Y, k, k, -1);
        }
        if (m(k, k) != 1) throw Error(ErrorCode::Internal, "column is not primitive");
        // Partner column s+k to e_{s+k}; these operations fix e_k.
        for (std::size_t i = k + 1; i < s; ++i) {
            op(K::U, k, i, m(s + i, s + k));
            op(K::V, std::min(i, k), std::max(i, k), -m(i, s + k));
        }
        op(K::X, k, k, -m(k, s + k));
    }
    if (!m.is_identity()) throw Error(ErrorCode::Internal, "symplectic reduction did not reach the identity");
    out.letters.assign(applied.begin(), applied.end());
    return out;
}

/// Header with the generator matrices, then one word per line.
inline void export_words(std::ostream& os, const StandardGenerators& S, const std::vector<SymplecticWord>& words) {
    os << "# standard generators of Sp(" << S.dim() << ",Z), row-major\n";
    for (std::size_t k = 0; k < S.size(); ++k) {
        const IntMatrix m = S.matrix(k);
        os << "# g" << (k + 1) << " =";
        for (const auto& x : m.data()) os << ' ' << x;
        os << '\n';
    }
    for (const auto& w : words) os << (w.letters.empty() ? std::string("1") : w.to_string()) << '\n';
}

}  // namespace hgm
