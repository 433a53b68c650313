#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hypergeom/construct.hpp"
#include "hypergeom/matrix.hpp"
#include "hypergeom/number_theory.hpp"

namespace hgm {

/// Primitive integral alternating form fixed by every generator (x Phi x^T = Phi).
inline RatMatrix invariant_form(const std::vector<RatMatrix>& gens) {
    if (gens.empty()) throw Error(ErrorCode::InvalidArgument, "no generators");
    const std::size_t n = gens.front().rows();
    std::vector<std::pair<std::size_t, std::size_t>> vars;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) vars.emplace_back(i, j);
    // Each unknown contributes the skew matrix E_ij - E_ji.
    auto basis_form = [&](std::size_t v) {
        RatMatrix x(n, n);
        x(vars[v].first, vars[v].second) = 1;
        x(vars[v].second, vars[v].first) = -1;
        return x;
    };
    std::vector<RatMatrix> images;
    for (std::size_t v = 0; v < vars.size(); ++v) images.push_back(basis_form(v));
    std::size_t eqs = 0;
    RatMatrix sys(gens.size() * vars.size(), vars.size());
    for (const auto& g : gens) {
        const RatMatrix gt = g.transpose();
        std::vector<RatMatrix> moved;
        for (std::size_t v = 0; v < vars.size(); ++v) moved.push_back(g * images[v] * gt - images[v]);
        for (std::size_t e = 0; e < vars.size(); ++e, ++eqs)
            for (std::size_t v = 0; v < vars.size(); ++v) sys(eqs, v) = moved[v](vars[e].first, vars[e].second);
    }
    auto ker = rational_kernel(sys);
    if (ker.size() != 1)
        throw Error(ErrorCode::FormNotUnique, "invariant form space has dimension " + std::to_string(ker.size()));
    RatMatrix phi(n, n);
    for (std::size_t v = 0; v < vars.size(); ++v) {
        phi(vars[v].first, vars[v].second) = Rational(ker[0][v]);
        phi(vars[v].second, vars[v].first) = Rational(-ker[0][v]);
    }
    if (determinant(phi) == 0) throw Error(ErrorCode::FormDegenerate, "invariant form is degenerate");
    return phi;
}

inline RatMatrix invariant_form(const HypergroupData& H) { return invariant_form(H.generators()); }

namespace detail {

inline Rational pairing(const RatVector& x, const RatMatrix& phi, const RatVector& y) {
    Rational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        Rational t = 0;
        for (std::size_t j = 0; j < y.size(); ++j) t += phi(i, j) * y[j];
        s += x[i] * t;
    }
    return s;
}

}  // namespace detail

/// Rows x_1..x_s, y_1..y_s of the returned X satisfy X Phi X^T = J, found by
/// greedy symplectic Gram-Schmidt starting from the given vectors.
inline RatMatrix symplectic_gram_schmidt(const RatMatrix& phi, std::vector<RatVector> pool) {
    const std::size_t n = phi.rows(), s = n / 2;
    RatMatrix X(n, n);
    for (std::size_t t = 0; t < s; ++t) {
        // Drop vectors that became zero.
        pool.erase(std::remove_if(pool.begin(), pool.end(),
                                  [](const RatVector& v) { return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; }); }),
                   pool.end());
        if (pool.empty()) throw Error(ErrorCode::FormDegenerate, "form is degenerate");
        RatVector x = pool.front();
        std::size_t yi = 1;
        Rational b = 0;
        for (; yi < pool.size(); ++yi) {
            b = detail::pairing(x, phi, pool[yi]);
            if (b != 0) break;
        }
        if (yi == pool.size()) throw Error(ErrorCode::FormDegenerate, "form is degenerate");
        RatVector y = pool[yi];
        for (auto& c : y) c /= b;
        pool.erase(pool.begin() + static_cast<long>(yi));
        pool.erase(pool.begin());
        for (auto& z : pool) {
            const Rational bzy = detail::pairing(z, phi, y), bzx = detail::pairing(z, phi, x);
            for (std::size_t k = 0; k < n; ++k) z[k] += -bzy * x[k] + bzx * y[k];
        }
        for (std::size_t k = 0; k < n; ++k) {
            X(t, k) = x[k];
            X(s + t, k) = y[k];
        }
    }
    return X;
}

/// g with g J g^T = Phi, by symplectic Gram-Schmidt on the standard basis.
inline RatMatrix symplectic_basechange(const RatMatrix& phi) {
    const std::size_t n = phi.rows();
    std::vector<RatVector> pool;
    for (std::size_t i = 0; i < n; ++i) {
        RatVector e(n);
        e[i] = 1;
        pool.push_back(e);
    }
    return inverse(symplectic_gram_schmidt(phi, std::move(pool)));
}

/// u in GL(n,Z) and D = (d_1 | d_2 | ... | d_s) with u Phi u^T = [[0, D], [-D, 0]].
struct SymplecticSmith {
    IntMatrix u;
    std::vector<Integer> d;
};

inline SymplecticSmith symplectic_smith(const IntMatrix& phi) {
    const std::size_t n = phi.rows(), s = n / 2;
    IntMatrix a = phi, u = IntMatrix::identity(n);
    // k <- k + q*l applied as a congruence (row and column).
    auto add = [&](std::size_t k, std::size_t l, const Integer& q) {
        if (q == 0) return;
        for (std::size_t j = 0; j < n; ++j) a(k, j) += q * a(l, j);
        for (std::size_t i = 0; i < n; ++i) a(i, k) += q * a(i, l);
        for (std::size_t j = 0; j < n; ++j) u(k, j) += q * u(l, j);
    };
    auto swap = [&](std::size_t k, std::size_t l) {
        if (k == l) return;
        for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(l, j));
        for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k), a(i, l));
        for (std::size_t j = 0; j < n; ++j) std::swap(u(k, j), u(l, j));
    };
    for (std::size_t pos = 0; pos + 1 < n; pos += 2) {
        while (true) {
            std::size_t bi = n, bj = n;
            for (std::size_t i = pos; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (a(i, j) != 0 && (bi == n || abs(a(i, j)) < abs(a(bi, bj)))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == n) throw Error(ErrorCode::FormDegenerate, "form is degenerate");
            swap(pos, bi);
            // bj may have been moved by the first swap.
            std::size_t nj = bj == pos ? bi : bj;
            swap(pos + 1, nj);
            const Integer piv = a(pos, pos + 1);
            bool clean = true;
            for (std::size_t k = pos + 2; k < n; ++k) {
                add(k, pos + 1, -floor_div(a(pos, k), piv));
                add(k, pos, floor_div(a(pos + 1, k), piv));
                if (a(pos, k) != 0 || a(pos + 1, k) != 0) clean = false;
            }
            if (!clean) continue;
            std::size_t bad = n;
            for (std::size_t k = pos + 2; k < n && bad == n; ++k)
                for (std::size_t l = pos + 2; l < n; ++l)
                    if (a(k, l) % piv != 0) {
                        bad = k;
                        break;
                    }
            if (bad == n) break;
            add(pos, bad, 1);
        }
        if (a(pos, pos + 1) < 0) swap(pos, pos + 1);
    }
    SymplecticSmith out;
    out.u = IntMatrix(n, n);
    for (std::size_t t = 0; t < s; ++t) {
        out.d.push_back(a(2 * t, 2 * t + 1));
        for (std::size_t j = 0; j < n; ++j) {
            out.u(t, j) = u(2 * t, j);
            out.u(s + t, j) = u(2 * t + 1, j);
        }
    }
    return out;
}

/// Result of choosing a base change g (g J g^T = Phi) for a group.
struct FormData {
    RatMatrix Phi;
    RatMatrix basechange_g;
    RatMatrix X;  ///< g^{-1}: its rows form a symplectic basis for Phi
    std::vector<RatMatrix> L_generators;
    RatMatrix h;
    Integer kbar = 1;
    std::size_t candidate_index = 0;
    std::string candidate_label;
    RatMatrix J;
};

struct NormalizeOptions {
    std::size_t candidates = 24;
    std::uint64_t power_bound = 360;
    std::uint64_t seed = 1;
};

/// Minimal k in [1, bound] with l^k integral; nothing if none.
inline std::optional<std::uint64_t> minimal_integral_power(const RatMatrix& l, std::uint64_t bound) {
    RatMatrix p = l;
    for (std::uint64_t k = 1; k <= bound; ++k) {
        if (is_integral(p)) return k;
        p = p * l;
    }
    return std::nullopt;
}

namespace detail {

struct Candidate {
    RatMatrix X;
    std::string label;
};

inline std::vector<Integer> divisors(const Integer& d) {
    std::vector<Integer> out{1};
    for (const auto& [p, e] : factor(d).primes) {
        std::vector<Integer> next;
        for (const auto& x : out) {
            Integer pe = 1;
            for (std::uint64_t i = 0; i <= e; ++i, pe *= p) next.push_back(x * pe);
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Symplectic bases e_t / a_t, f_t / (d_t / a_t) over all divisor splits (capped).
inline void smith_candidates(const IntMatrix& phi_twisted, const IntMatrix& w, const std::string& tag,
                             std::size_t cap, std::vector<Candidate>& out) {
    const std::size_t n = phi_twisted.rows(), s = n / 2;
    SymplecticSmith sm = symplectic_smith(phi_twisted);
    std::vector<std::vector<Integer>> divs;
    for (const auto& d : sm.d) divs.push_back(divisors(d));
    std::vector<std::size_t> idx(s, 0);
    const RatMatrix U = to_rational(sm.u) * to_rational(w);
    for (std::size_t made = 0; made < cap; ++made) {
        RatMatrix X(n, n);
        std::string label = tag;
        for (std::size_t t = 0; t < s; ++t) {
            const Integer a = divs[t][idx[t]], b = sm.d[t] / a;
            for (std::size_t j = 0; j < n; ++j) {
                X(t, j) = U(t, j) / Rational(a);
                X(s + t, j) = U(s + t, j) / Rational(b);
            }
            if (sm.d[t] != 1) label += "/" + a.get_str() + ":" + b.get_str();
        }
        out.push_back({X, label});
        std::size_t t = 0;
        while (t < s && ++idx[t] == divs[t].size()) idx[t++] = 0;
        if (t == s) break;
    }
}

inline IntMatrix random_unimodular(std::size_t n, std::mt19937_64& rng) {
    IntMatrix w = IntMatrix::identity(n);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> mult(-2, 2);
    for (std::size_t step = 0; step < 3 * n; ++step) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        int q = mult(rng);
        if (q == 0) q = 1;
        for (std::size_t c = 0; c < n; ++c) w(i, c) += q * w(j, c);
    }
    return w;
}

}  // namespace detail

/// Base-change candidates: integral symplectic Smith bases with all divisor
/// splits, the Gram-Schmidt basis, and Smith bases of seeded unimodular twists.
inline std::vector<detail::Candidate> basechange_candidates(const RatMatrix& phi, const NormalizeOptions& opt) {
    const std::size_t n = phi.rows();
    const IntMatrix iphi = to_integer(phi);
    std::vector<detail::Candidate> out;
    detail::smith_candidates(iphi, IntMatrix::identity(n), "smith", opt.candidates, out);
    out.push_back({inverse(symplectic_basechange(phi)), "gram-schmidt"});
    std::mt19937_64 rng(opt.seed);
    for (std::size_t t = 1; out.size() < opt.candidates && t < 4 * opt.candidates; ++t) {
        IntMatrix w = detail::random_unimodular(n, rng);
        IntMatrix tw = w * iphi * w.transpose();
        detail::smith_candidates(tw, w, "twist" + std::to_string(t), 1 + (t % 3), out);
    }
    if (out.size() > opt.candidates) out.resize(opt.candidates);
    return out;
}

/// Conjugates the group into Sp(n,Q) (l = X x X^{-1}, X = g^{-1}) choosing the
/// candidate with minimal kbar, then smaller max |entry|, then lower index.
inline FormData normalize_group(const HypergroupData& H, const NormalizeOptions& opt = {}) {
    if (opt.candidates == 0) throw Error(ErrorCode::InvalidArgument, "need at least one candidate");
    const RatMatrix phi = invariant_form(H);
    const std::size_t n = phi.rows();
    const RatMatrix J = standard_form(n);
    auto cands = basechange_candidates(phi, opt);
    std::optional<FormData> best;
    Rational best_entry = 0;
    for (std::size_t ci = 0; ci < cands.size(); ++ci) {
        const RatMatrix& X = cands[ci].X;
        if (X * phi * X.transpose() != J) throw Error(ErrorCode::Internal, "candidate is not a symplectic basis");
        const RatMatrix Xi = inverse(X);
        std::vector<RatMatrix> gens;
        for (const auto& x : H.generators()) gens.push_back(X * x * Xi);
        Integer kbar = 1;
        bool ok = true;
        for (const auto& l : gens) {
            auto k = minimal_integral_power(l, opt.power_bound);
            if (!k) {
                ok = false;
                break;
            }
            kbar = lcm(kbar, from_u64(*k));
        }
        if (!ok) continue;
        Rational entry = 0;
        for (const auto& l : gens) entry = std::max(entry, max_abs_entry(l));
        if (best && (kbar > best->kbar || (kbar == best->kbar && entry >= best_entry))) continue;
        FormData fd;
        fd.Phi = phi;
        fd.X = X;
        fd.basechange_g = Xi;
        fd.L_generators = gens;
        fd.h = X * H.h_1 * Xi;
        fd.kbar = kbar;
        fd.candidate_index = ci;
        fd.candidate_label = cands[ci].label;
        fd.J = J;
        best = std::move(fd);
        best_entry = entry;
    }
    if (!best) throw Error(ErrorCode::NoIntegralCandidate, "no candidate has integral generator powers within the bound");
    return *best;
}

/// Base change by a caller-supplied X (rows a symplectic basis of Phi).
inline FormData form_data_for_basis(const HypergroupData& H, const RatMatrix& X, std::uint64_t power_bound = 360) {
    FormData fd;
    fd.Phi = invariant_form(H);
    fd.J = standard_form(fd.Phi.rows());
    if (X * fd.Phi * X.transpose() != fd.J) throw Error(ErrorCode::InvalidArgument, "basis is not symplectic for the form");
    fd.X = X;
    fd.basechange_g = inverse(X);
    for (const auto& x : H.generators()) fd.L_generators.push_back(X * x * fd.basechange_g);
    fd.h = X * H.h_1 * fd.basechange_g;
    for (const auto& l : fd.L_generators) {
        auto k = minimal_integral_power(l, power_bound);
        fd.kbar = k ? lcm(fd.kbar, from_u64(*k)) : Integer(0);
        if (!k) break;
    }
    fd.candidate_label = "explicit";
    return fd;
}

}  // namespace hgm
