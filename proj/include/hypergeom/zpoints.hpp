#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypergeom/congruence.hpp"
#include "hypergeom/density.hpp"
#include "hypergeom/form.hpp"
#include "hypergeom/matrix.hpp"

namespace hgm {

/// Full-rank lattice (1/den) * rowspace(hnf) in Q^n, kept canonical.
struct Lattice {
    Integer den = 1;
    IntMatrix hnf;

    static Lattice from_rows(const RatMatrix& rows) {
        Lattice l;
        l.den = denominator_lcm(rows);
        IntMatrix z(rows.rows(), rows.cols());
        for (std::size_t k = 0; k < rows.data().size(); ++k) z.data()[k] = Rational(rows.data()[k] * l.den).get_num();
        l.hnf = hermite_normal_form(z);
        l.normalize();
        return l;
    }

    static Lattice standard(std::size_t n) { return from_rows(RatMatrix::identity(n)); }

    RatMatrix basis() const {
        RatMatrix b = to_rational(hnf);
        for (auto& q : b.data()) q /= Rational(den);
        return b;
    }

    std::string key() const {
        std::string k = den.get_str();
        for (const auto& x : hnf.data()) {
            k += ',';
            k += x.get_str();
        }
        return k;
    }

    friend bool operator==(const Lattice& a, const Lattice& b) { return a.den == b.den && a.hnf == b.hnf; }

    friend Lattice operator+(const Lattice& a, const Lattice& b) {
        const std::size_t n = a.hnf.cols();
        RatMatrix rows(a.hnf.rows() + b.hnf.rows(), n);
        RatMatrix ab = a.basis(), bb = b.basis();
        for (std::size_t i = 0; i < ab.rows(); ++i)
            for (std::size_t j = 0; j < n; ++j) rows(i, j) = ab(i, j);
        for (std::size_t i = 0; i < bb.rows(); ++i)
            for (std::size_t j = 0; j < n; ++j) rows(ab.rows() + i, j) = bb(i, j);
        return from_rows(rows);
    }

    /// Dual lattice for the standard dot product.
    Lattice dual() const { return from_rows(inverse(basis()).transpose()); }

    Lattice scaled(const Rational& c) const {
        RatMatrix b = basis();
        for (auto& q : b.data()) q *= c;
        return from_rows(b);
    }

    /// Image under right multiplication by x.
    Lattice times(const RatMatrix& x) const { return from_rows(basis() * x); }

private:
    void normalize() {
        Integer g = den;
        for (const auto& x : hnf.data()) g = gcd(g, x);
        if (g > 1) {
            den /= g;
            for (auto& x : hnf.data()) x /= g;
        }
    }
};

inline Lattice intersect(const Lattice& a, const Lattice& b) { return (a.dual() + b.dual()).dual(); }

struct ZPointsOptions {
    std::uint64_t max_cosets = 1'000'000;
    std::size_t subproducts = 300;
    std::size_t subproduct_length = 8;
    unsigned integrality_rounds = 64;
    std::uint64_t seed = 1;
};

/// Smallest d with d*L integral, via the invariant lattice generated by Z^n
/// under the group; NotIntegral when it does not stabilize.
inline Integer integrality_scale(const std::vector<RatMatrix>& gens, const ZPointsOptions& opt = {}) {
    const std::size_t n = gens.front().rows();
    std::vector<RatMatrix> all = gens;
    for (const auto& g : gens) all.push_back(inverse(g));
    Lattice lat = Lattice::standard(n);
    for (unsigned round = 0; round < opt.integrality_rounds; ++round) {
        Lattice next = lat;
        for (const auto& g : all) next = next + lat.times(g);
        if (next == lat) return lat.den;
        lat = next;
    }
    throw Error(ErrorCode::NotIntegral, "invariant lattice did not stabilize; the group is not integral");
}

/// A group element with its word in the original generators.
struct TrackedElement {
    RatMatrix m;
    Word w;
};

inline Word word_inverse(const Word& w) {
    Word r(w.rbegin(), w.rend());
    for (auto& l : r) l = -l;
    return r;
}

inline Word word_concat(const Word& a, const Word& b) {
    Word r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

struct OrbitResult {
    std::vector<TrackedElement> transversal;
    std::vector<TrackedElement> schreier;  ///< nontrivial Schreier generators, untrimmed
};

/// Right cosets U x of the subgroup U = {x : key(x) = key(1)}, explored by
/// right multiplication with the generators.
inline OrbitResult coset_orbit(const std::vector<TrackedElement>& gens,
                               const std::function<std::string(const RatMatrix&)>& key,
                               std::uint64_t max_cosets = 1'000'000) {
    const std::size_t n = gens.front().m.rows();
    OrbitResult out;
    std::unordered_map<std::string, std::size_t> index;
    out.transversal.push_back({RatMatrix::identity(n), {}});
    index.emplace(key(out.transversal[0].m), 0);
    std::vector<RatMatrix> rep_inv{RatMatrix::identity(n)};
    for (std::size_t r = 0; r < out.transversal.size(); ++r)
        for (const auto& g : gens) {
            RatMatrix x = out.transversal[r].m * g.m;
            Word xw = word_concat(out.transversal[r].w, g.w);
            std::string k = key(x);
            auto it = index.find(k);
            if (it == index.end()) {
                if (out.transversal.size() >= max_cosets)
                    throw Error(ErrorCode::TransversalBudgetExceeded, "more than " + std::to_string(max_cosets) + " cosets");
                index.emplace(std::move(k), out.transversal.size());
                rep_inv.push_back(inverse(x));
                out.transversal.push_back({std::move(x), std::move(xw)});
                continue;
            }
            RatMatrix y = x * rep_inv[it->second];
            if (y.is_identity()) continue;
            out.schreier.push_back({std::move(y), word_concat(xw, word_inverse(out.transversal[it->second].w))});
        }
    return out;
}

/// Random subproducts standing in for a large Schreier generating set.
inline std::vector<TrackedElement> thin_generators(const std::vector<TrackedElement>& gens, std::size_t count,
                                                   std::size_t max_len, std::mt19937_64& rng) {
    if (gens.size() <= count) return gens;
    std::vector<TrackedElement> out;
    std::uniform_int_distribution<std::size_t> len(1, max_len), pick(0, gens.size() - 1);
    const std::size_t n = gens.front().m.rows();
    for (std::size_t i = 0; i < count; ++i) {
        TrackedElement e{RatMatrix::identity(n), {}};
        std::size_t l = len(rng);
        for (std::size_t k = 0; k < l; ++k) {
            const auto& g = gens[pick(rng)];
            e.m = e.m * g.m;
            e.w = word_concat(e.w, g.w);
        }
        if (!e.m.is_identity()) out.push_back(std::move(e));
    }
    return out;
}

struct IntegerPointsData {
    Integer d = 1;
    Integer sigma = 1;
    std::set<Integer> sigma_primes;
    std::vector<TrackedElement> transversal_L_over_K, transversal_K_over_LZ;
    std::vector<TrackedElement> LZ_generators;
    std::vector<TrackedElement> untrimmed_schreier;
    Integer index = 1;
    RatMatrix lambda;
    Integer lambda_k = 1;
    bool verified = false;

    std::vector<IntMatrix> integer_generators() const {
        std::vector<IntMatrix> out;
        for (const auto& g : LZ_generators) out.push_back(to_integer(g.m));
        return out;
    }
};

/// Key of the right coset K x for K = L ∩ GL(n, Z_(P)): the lattice agreeing
/// with Z^n x at the primes P and with Z^n elsewhere.
inline std::string local_lattice_key(const RatMatrix& x, const std::set<Integer>& P) {
    auto p_part = [&](Integer v) {
        Integer out = 1;
        for (const auto& p : P)
            while (v % p == 0) {
                v /= p;
                out *= p;
            }
        return out;
    };
    const std::size_t n = x.rows();
    const Lattice lx = Lattice::from_rows(x);
    const Integer N1 = p_part(denominator_lcm(inverse(x)));
    const Integer D1 = p_part(denominator_lcm(x));
    const Lattice a = lx + Lattice::standard(n).scaled(Rational(N1));
    const Lattice b = Lattice::standard(n).scaled(make_rational(1, D1));
    return intersect(a, b).key();
}

inline std::string lattice_key(const RatMatrix& x) { return Lattice::from_rows(x).key(); }

inline RatMatrix integral_transvection(const RatMatrix& h, Integer& k) {
    const std::size_t n = h.rows();
    const RatMatrix d = h - RatMatrix::identity(n);
    k = denominator_lcm(d);
    return RatMatrix::identity(n) + Rational(k) * d;
}

/// L_Z = L ∩ GL(n,Z) in two stages: cosets of K = L ∩ GL(n, Z_(P)) (P = all
/// denominator primes but the largest), then cosets of L_Z inside K.
inline IntegerPointsData integer_points(const std::vector<RatMatrix>& L_generators, const RatMatrix& h,
                                        const ZPointsOptions& opt = {}) {
    IntegerPointsData out;
    const std::size_t n = h.rows();
    std::mt19937_64 rng(opt.seed);
    out.d = integrality_scale(L_generators, opt);
    Integer mu = denominator_mu(L_generators);
    if (mu > 1) out.sigma_primes = prime_divisors(mu);
    for (const auto& p : out.sigma_primes) out.sigma *= p;
    out.lambda = integral_transvection(h, out.lambda_k);

    std::vector<TrackedElement> gens;
    for (std::size_t i = 0; i < L_generators.size(); ++i) gens.push_back({L_generators[i], {static_cast<int>(i + 1)}});

    std::set<Integer> P1 = out.sigma_primes;
    if (!P1.empty()) P1.erase(std::prev(P1.end()));
    std::vector<TrackedElement> kgens = gens;
    if (!P1.empty()) {
        OrbitResult st1 = coset_orbit(gens, [&](const RatMatrix& x) { return local_lattice_key(x, P1); }, opt.max_cosets);
        out.transversal_L_over_K = st1.transversal;
        kgens = thin_generators(st1.schreier, opt.subproducts, opt.subproduct_length, rng);
        if (kgens.empty()) kgens.push_back({RatMatrix::identity(n), {}});
    } else {
        out.transversal_L_over_K = {{RatMatrix::identity(n), {}}};
    }
    OrbitResult st2 = coset_orbit(kgens, lattice_key, opt.max_cosets);
    out.transversal_K_over_LZ = st2.transversal;
    out.untrimmed_schreier = st2.schreier;
    out.LZ_generators = thin_generators(st2.schreier, opt.subproducts, opt.subproduct_length, rng);
    if (out.LZ_generators.empty() && !kgens.front().m.is_identity() && st2.transversal.size() == 1)
        out.LZ_generators = kgens;
    // lambda = h^k lies in L_Z; keep it among the generators.
    Word lw;
    for (Integer i = 0; i < out.lambda_k; ++i) lw.push_back(0);
    out.LZ_generators.push_back({out.lambda, lw});
    out.index = Integer(static_cast<unsigned long>(out.transversal_L_over_K.size())) *
                Integer(static_cast<unsigned long>(out.transversal_K_over_LZ.size()));
    for (const auto& g : out.LZ_generators)
        if (!is_integral(g.m)) throw Error(ErrorCode::Internal, "non-integral element among the Z-point generators");
    return out;
}

/// Single-stage variant: cosets of L_Z directly.
inline Integer single_stage_index(const std::vector<RatMatrix>& L_generators, std::uint64_t max_cosets = 1'000'000) {
    std::vector<TrackedElement> gens;
    for (std::size_t i = 0; i < L_generators.size(); ++i) gens.push_back({L_generators[i], {static_cast<int>(i + 1)}});
    return Integer(static_cast<unsigned long>(coset_orbit(gens, lattice_key, max_cosets).transversal.size()));
}

/// Checks modulo the level that every untrimmed Schreier generator lies in
/// the group generated by the chosen set.
inline bool verify_zpoints(IntegerPointsData& data, const PrimePowers& level, const ChainOptions& opt = {}) {
    if (evaluate(level) == 1) {
        data.verified = true;
        return true;
    }
    CongruenceImage img(data.integer_generators(), level, opt);
    for (const auto& s : data.untrimmed_schreier)
        if (!img.contains(to_integer(s.m))) {
            data.verified = false;
            return false;
        }
    data.verified = true;
    return true;
}

}  // namespace hgm
