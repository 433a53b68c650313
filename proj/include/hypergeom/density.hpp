#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hypergeom/congruence.hpp"
#include "hypergeom/matrix.hpp"
#include "hypergeom/number_theory.hpp"

namespace hgm {

/// Word over generators: letter +(i+1) is gens[i], -(i+1) its inverse.
using Word = std::vector<int>;

inline std::string word_to_string(const Word& w) {
    if (w.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(w[i]);
    }
    return s;
}

/// Product of conjugates c_1 tau c_1^{-1} * ... ; the empty product is the identity.
struct AlgebraWord {
    std::vector<Word> conjugators;

    std::string to_string() const {
        if (conjugators.empty()) return "1";
        std::string s;
        for (std::size_t i = 0; i < conjugators.size(); ++i) {
            if (i) s += " * ";
            s += "tau^(" + word_to_string(conjugators[i]) + ")";
        }
        return s;
    }
};

struct DensityCertificate {
    bool dense = false;
    std::size_t dimension = 0;
    RatMatrix tau;
    std::vector<AlgebraWord> basis_words;
    std::vector<RatMatrix> basis;
    /// Further algebra elements met while spinning; used for alternative bases.
    std::vector<RatMatrix> extra;
    Integer mu = 1;
    std::set<Integer> Pi1, Pi;
};

inline bool is_transvection(const RatMatrix& h) {
    const RatMatrix d = h - RatMatrix::identity(h.rows());
    return rank(d) == 1 && (d * d).is_zero();
}

/// lcm of all denominators of the generators and their inverses.
inline Integer denominator_mu(const std::vector<RatMatrix>& gens) {
    Integer mu = 1;
    for (const auto& g : gens) {
        mu = lcm(mu, denominator_lcm(g));
        mu = lcm(mu, denominator_lcm(inverse(g)));
    }
    return mu;
}

/// Spins the enveloping algebra of the normal closure of tau: first the
/// conjugation-stable span of tau, then products from 1 by that span.
inline DensityCertificate is_dense(const std::vector<RatMatrix>& gens, const RatMatrix& tau) {
    if (!is_transvection(tau)) throw Error(ErrorCode::NotATransvection, "rank(tau - 1) must be 1 with (tau - 1)^2 = 0");
    const std::size_t n = tau.rows(), n2 = n * n;
    std::vector<RatMatrix> inv;
    for (const auto& g : gens) inv.push_back(inverse(g));

    // Conjugation-closed span V of tau.
    RationalSpan vspan(n2);
    std::vector<RatMatrix> vmat;
    std::vector<Word> vword;
    vspan.add(flatten(tau));
    vmat.push_back(tau);
    vword.push_back({});
    for (std::size_t q = 0; q < vmat.size() && vmat.size() < n2; ++q)
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (int sign : {1, -1}) {
                const RatMatrix& g = sign > 0 ? gens[i] : inv[i];
                const RatMatrix& gi = sign > 0 ? inv[i] : gens[i];
                RatMatrix c = g * vmat[q] * gi;
                if (!vspan.add(flatten(c))) continue;
                Word w{sign * static_cast<int>(i + 1)};
                w.insert(w.end(), vword[q].begin(), vword[q].end());
                vmat.push_back(std::move(c));
                vword.push_back(std::move(w));
            }

    DensityCertificate cert;
    cert.tau = tau;
    cert.mu = denominator_mu(gens);
    RationalSpan aspan(n2);
    std::vector<RatMatrix>& amat = cert.basis;
    std::vector<AlgebraWord>& aword = cert.basis_words;
    aspan.add(flatten(RatMatrix::identity(n)));
    amat.push_back(RatMatrix::identity(n));
    aword.push_back({});
    for (std::size_t q = 0; q < amat.size() && amat.size() < n2; ++q)
        for (std::size_t v = 0; v < vmat.size() && amat.size() < n2; ++v) {
            RatMatrix prod = amat[q] * vmat[v];
            if (!aspan.add(flatten(prod))) {
                if (cert.extra.size() < 4 * n2) cert.extra.push_back(std::move(prod));
                continue;
            }
            AlgebraWord w = aword[q];
            w.conjugators.push_back(vword[v]);
            amat.push_back(std::move(prod));
            aword.push_back(std::move(w));
        }
    // A few more products to draw alternative bases from.
    for (std::size_t q = 0; q < amat.size() && cert.extra.size() < 2 * n2; ++q)
        for (std::size_t v = vmat.size(); v-- > 0 && cert.extra.size() < 2 * n2;)
            cert.extra.push_back(vmat[v] * amat[q]);
    cert.dimension = aspan.size();
    cert.dense = cert.dimension == n2;
    return cert;
}

namespace detail {

/// Integer determinant of the n^2 x n^2 matrix of flattened elements, rows
/// cleared of denominators.
inline Integer cleared_determinant(const std::vector<RatMatrix>& elems) {
    const std::size_t n2 = elems.size();
    IntMatrix m(n2, n2);
    for (std::size_t i = 0; i < n2; ++i) {
        const Integer d = denominator_lcm(elems[i]);
        for (std::size_t j = 0; j < n2; ++j) m(i, j) = Rational(elems[i].data()[j] * d).get_num();
    }
    return determinant(m);
}

/// Greedy basis from a pool in the given order.
inline std::vector<RatMatrix> basis_from(const std::vector<const RatMatrix*>& pool, std::size_t n2) {
    RationalSpan span(n2);
    std::vector<RatMatrix> out;
    for (const RatMatrix* m : pool) {
        if (out.size() == n2) break;
        if (span.add(flatten(*m))) out.push_back(*m);
    }
    return out;
}

}  // namespace detail

struct PrimeOptions {
    FactorOptions factor;
    unsigned alternative_bases = 3;
    std::uint64_t seed = 1;
};

/// Primes outside of which the reductions of the certificate stay a basis and
/// tau stays nontrivial: support of the gcd of cleared determinants over a few
/// bases, of the content of d(1 - tau) and d, and of mu.
inline std::set<Integer> candidate_primes(DensityCertificate& cert, const PrimeOptions& opt = {}) {
    if (!cert.dense) throw Error(ErrorCode::InvalidArgument, "certificate is not dense");
    const std::size_t n = cert.tau.rows(), n2 = n * n;
    Integer g = detail::cleared_determinant(cert.basis);
    std::vector<const RatMatrix*> pool;
    for (const auto& m : cert.basis) pool.push_back(&m);
    for (const auto& m : cert.extra) pool.push_back(&m);
    std::mt19937_64 rng(opt.seed);
    for (unsigned alt = 0; alt < opt.alternative_bases && abs(g) > 1; ++alt) {
        std::vector<const RatMatrix*> order = pool;
        if (alt == 0) std::reverse(order.begin() + 1, order.end());
        else std::shuffle(order.begin() + 1, order.end(), rng);
        auto b = detail::basis_from(order, n2);
        if (b.size() == n2) g = gcd(g, detail::cleared_determinant(b));
    }
    std::set<Integer> out;
    if (abs(g) > 1) {
        FactorResult fr = factor(g, opt.factor);
        if (!fr.complete())
            throw Error(ErrorCode::FactorizationIncomplete, "could not split cofactor " + fr.unfactored.front().get_str());
        for (const auto& [p, e] : fr.primes) out.insert(p);
    }
    const RatMatrix d1 = RatMatrix::identity(n) - cert.tau;
    const Integer d = denominator_lcm(d1);
    Integer content = 0;
    for (const auto& q : d1.data()) content = gcd(content, Rational(q * d).get_num());
    for (const auto& p : prime_divisors(content * d, opt.factor)) out.insert(p);
    if (cert.mu > 1)
        for (const auto& p : prime_divisors(cert.mu, opt.factor)) out.insert(p);
    cert.Pi1 = out;
    return out;
}

struct SurjectivityOptions {
    /// p^n above this uses the irreducibility criterion (p >= 5 only).
    std::uint64_t chain_vectors = 2'000'000;
    ChainOptions chain;
};

/// Rank over F_p of the enveloping algebra of the normal closure of tau mod p.
inline std::size_t algebra_dimension_mod_p(const std::vector<RatMatrix>& gens, const RatMatrix& tau, std::uint64_t p) {
    const std::size_t n = tau.rows(), n2 = n * n;
    std::vector<ModMatrix> g, gi;
    for (const auto& x : gens) {
        g.push_back(ModMatrix::reduce(x, p));
        gi.push_back(ModMatrix::reduce(inverse(x), p));
    }
    auto flat = [&](const ModMatrix& m) {
        std::vector<std::uint64_t> v(n2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) v[i * n + j] = m(i, j);
        return v;
    };
    ModularSpan vspan(n2, p);
    std::vector<ModMatrix> vm{ModMatrix::reduce(tau, p)};
    vspan.add(flat(vm[0]));
    for (std::size_t q = 0; q < vm.size() && vm.size() < n2; ++q)
        for (std::size_t i = 0; i < g.size(); ++i)
            for (int s = 0; s < 2; ++s) {
                ModMatrix c = s == 0 ? g[i] * vm[q] * gi[i] : gi[i] * vm[q] * g[i];
                if (vspan.add(flat(c))) vm.push_back(c);
            }
    ModularSpan aspan(n2, p);
    std::vector<ModMatrix> am{ModMatrix::identity(n, p)};
    aspan.add(flat(am[0]));
    for (std::size_t q = 0; q < am.size() && am.size() < n2; ++q)
        for (const auto& v : vm) {
            ModMatrix c = am[q] * v;
            if (aspan.add(flat(c))) am.push_back(c);
        }
    return aspan.size();
}

/// Whether the reduction mod p is all of Sp(n,p): exact order for p <= 3 or
/// small p^n; otherwise irreducibility of the normal closure of a nontrivial
/// transvection.
inline bool surjective_mod_p(const std::vector<RatMatrix>& gens, const RatMatrix& tau, std::uint64_t p,
                             const SurjectivityOptions& opt = {}) {
    const std::size_t n = tau.rows();
    for (const auto& g : gens)
        if (denominator_lcm(g) % p == 0 || denominator_lcm(inverse(g)) % p == 0)
            throw Error(ErrorCode::DenominatorNotInvertible, "p divides a denominator");
    unsigned __int128 vecs = 1;
    for (std::size_t i = 0; i < n; ++i) vecs *= p;
    if (p <= 3 || vecs <= opt.chain_vectors) {
        std::vector<ModMatrix> red;
        for (const auto& g : gens) red.push_back(ModMatrix::reduce(g, p));
        const Integer bound = sp_order(n, p);
        StabilizerChain ch(red, p, opt.chain, bound);
        return ch.order() == bound;
    }
    if (ModMatrix::reduce(tau, p).is_identity()) return false;
    return algebra_dimension_mod_p(gens, tau, p) == n * n;
}

/// Primes of Pi1 where the reduction is not surjective.
inline std::set<Integer> exceptional_primes(const std::vector<RatMatrix>& gens, const RatMatrix& lambda,
                                            const std::set<Integer>& Pi1, const SurjectivityOptions& opt = {}) {
    std::set<Integer> out;
    for (const auto& p : Pi1)
        if (!surjective_mod_p(gens, lambda, to_u64(p), opt)) out.insert(p);
    return out;
}

}  // namespace hgm
