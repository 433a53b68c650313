#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hypergeom/matrix.hpp"
#include "hypergeom/polynomial.hpp"

namespace hgm {

enum class PairConvention { Unordered, Ordered };

/// A pair (f, g) of monic degree-n cyclotomic products.
struct PolyPair {
    unsigned n = 0;
    CyclotomicFactors f_factors, g_factors;
    IntPoly f, g;
    Integer coeff = 0;
    bool delta_is_one = false;
    std::optional<std::size_t> nr;

    /// Canonical text `C1^2*C2^2*C4 | C18`.
    std::string canonical() const;
};

inline std::string format_factors(const CyclotomicFactors& fac) {
    std::string out;
    for (const auto& [k, m] : fac) {
        if (m == 0) continue;
        if (!out.empty()) out += '*';
        out += 'C' + std::to_string(k);
        if (m > 1) out += '^' + std::to_string(m);
    }
    return out.empty() ? "1" : out;
}

inline std::string PolyPair::canonical() const { return format_factors(f_factors) + " | " + format_factors(g_factors); }

inline CyclotomicFactors parse_factors(std::string_view text) {
    CyclotomicFactors out;
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '\t') s.push_back(c);
    if (s.empty() || s == "1") return out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t end = s.find('*', pos);
        if (end == std::string::npos) end = s.size();
        std::string tok = s.substr(pos, end - pos);
        if (tok.size() < 2 || (tok[0] != 'C' && tok[0] != 'c'))
            throw Error(ErrorCode::ParseError, "bad cyclotomic token '" + tok + "'");
        auto caret = tok.find('^');
        try {
            std::uint64_t k = std::stoull(tok.substr(1, caret == std::string::npos ? std::string::npos : caret - 1));
            unsigned m = caret == std::string::npos ? 1u : static_cast<unsigned>(std::stoul(tok.substr(caret + 1)));
            if (k == 0 || m == 0) throw Error(ErrorCode::ParseError, "bad cyclotomic token '" + tok + "'");
            out[k] += m;
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::ParseError, "bad cyclotomic token '" + tok + "'");
        }
        pos = end + 1;
    }
    return out;
}

/// |leading nonzero coefficient of f - g|; zero only when f = g.
inline Integer leading_difference(const IntPoly& f, const IntPoly& g) {
    const IntPoly d = f - g;
    return d.is_zero() ? Integer(0) : Integer(abs(d.leading()));
}

/// Coeff and the |Coeff| <= 2 arithmeticity flag.
inline std::pair<Integer, bool> coeff_and_criterion(const PolyPair& pair) {
    Integer c = leading_difference(pair.f, pair.g);
    return {c, c <= 2};
}

inline std::uint64_t factors_degree(const CyclotomicFactors& fac) {
    std::uint64_t d = 0;
    for (const auto& [k, m] : fac) d += euler_phi(k) * m;
    return d;
}

/// Builds and validates a pair; throws InvalidArgument if it is not admissible.
inline PolyPair make_poly_pair(const CyclotomicFactors& f, const CyclotomicFactors& g) {
    PolyPair p;
    const std::uint64_t df = factors_degree(f), dg = factors_degree(g);
    if (df != dg) throw Error(ErrorCode::InvalidArgument, "polynomials have different degrees");
    if (df % 2 != 0 || df < 2) throw Error(ErrorCode::UnsupportedDegree, "degree must be even");
    for (const auto& [k, m] : f)
        if (g.count(k)) throw Error(ErrorCode::InvalidArgument, "f and g share the factor C" + std::to_string(k));
    p.n = static_cast<unsigned>(df);
    p.f_factors = f;
    p.g_factors = g;
    p.f = cyclotomic_product(f);
    p.g = cyclotomic_product(g);
    p.delta_is_one = p.f.coeff(0) == p.g.coeff(0);
    p.coeff = leading_difference(p.f, p.g);
    return p;
}

inline PolyPair parse_pair(std::string_view text) {
    auto bar = text.find('|');
    if (bar == std::string_view::npos) throw Error(ErrorCode::ParseError, "pair must have the form 'f | g'");
    return make_poly_pair(parse_factors(text.substr(0, bar)), parse_factors(text.substr(bar + 1)));
}

namespace detail {

inline std::vector<std::uint64_t> expand(const CyclotomicFactors& f) {
    std::vector<std::uint64_t> v;
    for (const auto& [k, m] : f) v.insert(v.end(), m, k);
    return v;
}

inline void monic_products(const std::vector<std::uint64_t>& ks, std::size_t from, std::uint64_t remaining,
                           CyclotomicFactors& cur, std::vector<CyclotomicFactors>& out) {
    if (remaining == 0) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = from; i < ks.size(); ++i) {
        const std::uint64_t d = euler_phi(ks[i]);
        if (d > remaining) continue;
        ++cur[ks[i]];
        monic_products(ks, i, remaining - d, cur, out);
        if (--cur[ks[i]] == 0) cur.erase(ks[i]);
    }
}

}  // namespace detail

/// All monic degree-n products of cyclotomic polynomials.
inline std::vector<CyclotomicFactors> cyclotomic_products_of_degree(unsigned n) {
    std::vector<CyclotomicFactors> out;
    CyclotomicFactors cur;
    detail::monic_products(cyclotomic_indices_up_to_degree(n), 0, n, cur, out);
    return out;
}

/// All coprime pairs with f(0) = g(0), ordered by (Coeff, f, g) where f and g
/// compare as sorted index lists. Under the unordered convention f is the
/// lexicographically smaller polynomial of each pair.
inline std::vector<PolyPair> enumerate_pairs(unsigned n, PairConvention conv = PairConvention::Unordered) {
    if (n % 2 != 0 || n < 2) throw Error(ErrorCode::UnsupportedDegree, "degree must be even and positive");
    auto prods = cyclotomic_products_of_degree(n);
    std::vector<std::pair<std::vector<std::uint64_t>, CyclotomicFactors>> keyed;
    for (auto& p : prods) keyed.emplace_back(detail::expand(p), p);
    std::sort(keyed.begin(), keyed.end());
    std::vector<PolyPair> out;
    for (std::size_t i = 0; i < keyed.size(); ++i)
        for (std::size_t j = 0; j < keyed.size(); ++j) {
            if (i == j || (conv == PairConvention::Unordered && j < i)) continue;
            const auto& f = keyed[i].second;
            const auto& g = keyed[j].second;
            bool coprime = std::none_of(f.begin(), f.end(), [&](const auto& kv) { return g.count(kv.first) > 0; });
            if (!coprime) continue;
            PolyPair p = make_poly_pair(f, g);
            if (!p.delta_is_one) continue;
            out.push_back(std::move(p));
        }
    std::stable_sort(out.begin(), out.end(), [](const PolyPair& a, const PolyPair& b) {
        if (a.coeff != b.coeff) return a.coeff < b.coeff;
        auto af = detail::expand(a.f_factors), bf = detail::expand(b.f_factors);
        if (af != bf) return af < bf;
        return detail::expand(a.g_factors) < detail::expand(b.g_factors);
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].nr = i + 1;
    return out;
}

/// Companion matrix with subdiagonal ones and last column -(c_0, ..., c_{n-1}).
inline RatMatrix companion(const IntPoly& p) {
    const std::size_t n = static_cast<std::size_t>(p.degree());
    RatMatrix a(n, n);
    for (std::size_t i = 1; i < n; ++i) a(i, i - 1) = 1;
    for (std::size_t i = 0; i < n; ++i) a(i, n - 1) = Rational(-p.coeff(i));
    return a;
}

/// Characteristic polynomial det(t - M) (Faddeev-LeVerrier over Q); M must have an integral one.
inline IntPoly characteristic_polynomial(const RatMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<Integer> c(n + 1, 0);
    c[n] = 1;
    RatMatrix prev = RatMatrix::identity(n);  // M_{k-1}
    Rational ck = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        RatMatrix amk = m * prev;
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += amk(i, i);
        ck = -tr / Rational(static_cast<long>(k));
        if (ck.get_den() != 1) throw Error(ErrorCode::Internal, "non-integral characteristic polynomial");
        c[n - k] = ck.get_num();
        prev = amk + ck * RatMatrix::identity(n);
    }
    return IntPoly(std::move(c));
}

/// Generators of the hypergeometric group of a pair.
struct HypergroupData {
    PolyPair pair;
    RatMatrix A, B;
    RatMatrix h_inf, h_0, h_1;

    std::vector<RatMatrix> generators() const { return {h_inf, h_0}; }
};

inline HypergroupData build_group(const PolyPair& pair) {
    HypergroupData H;
    H.pair = pair;
    H.A = companion(pair.f);
    H.B = companion(pair.g);
    H.h_inf = H.A;
    H.h_0 = inverse(H.B);
    H.h_1 = inverse(H.h_0 * H.h_inf);
    const std::size_t n = pair.n;
    if (rank(H.h_1 - RatMatrix::identity(n)) != 1)
        throw Error(ErrorCode::Internal, "h_1 - 1 does not have rank 1 for " + pair.canonical());
    if (determinant(H.h_1) != 1) throw Error(ErrorCode::Internal, "det(h_1) != 1 for " + pair.canonical());
    return H;
}

}  // namespace hgm
