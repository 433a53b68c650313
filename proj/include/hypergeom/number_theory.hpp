#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hypergeom/scalar.hpp"

namespace hgm {

/// Prime factorization: prime -> exponent. The empty map is the factorization of 1.
using PrimePowers = std::map<Integer, std::uint64_t>;

inline bool is_probable_prime(const Integer& n) {
    return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
        if (n % p == 0) return n == p;
    }
    for (std::uint64_t d = 17; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

/// Sieve of Eratosthenes up to and including `bound`.
inline std::vector<std::uint32_t> primes_up_to(std::uint32_t bound) {
    std::vector<bool> composite(bound + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return out;
}

inline PrimePowers factor_u64(std::uint64_t n) {
    PrimePowers out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            ++out[from_u64(p)];
            n /= p;
        }
    }
    if (n > 1) ++out[from_u64(n)];
    return out;
}

inline void multiply_into(PrimePowers& acc, const PrimePowers& other) {
    for (const auto& [p, e] : other) acc[p] += e;
}

/// acc / other; throws when the quotient is not integral.
inline PrimePowers divide(const PrimePowers& num, const PrimePowers& den) {
    PrimePowers out = num;
    for (const auto& [p, e] : den) {
        auto it = out.find(p);
        if (it == out.end() || it->second < e)
            throw Error(ErrorCode::Internal, "factorization quotient is not integral");
        it->second -= e;
        if (it->second == 0) out.erase(it);
    }
    return out;
}

inline Integer evaluate(const PrimePowers& f) {
    Integer r = 1;
    for (const auto& [p, e] : f) {
        Integer pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
        r *= pe;
    }
    return r;
}

inline std::set<Integer> support(const PrimePowers& f) {
    std::set<Integer> s;
    for (const auto& [p, e] : f)
        if (e > 0) s.insert(p);
    return s;
}

/// Renders as `2^3*3^5*5*7^2*13`; the factorization of 1 renders as `1`.
inline std::string format_factorization(const PrimePowers& f) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, e] : f) {
        if (e == 0) continue;
        if (!first) os << '*';
        first = false;
        os << p.get_str();
        if (e > 1) os << '^' << e;
    }
    return first ? std::string("1") : os.str();
}

/// Inverse of format_factorization. Accepts `*`, `.` or spaces between factors.
inline PrimePowers parse_factorization(std::string_view text) {
    PrimePowers out;
    std::string token;
    auto flush = [&]() {
        if (token.empty()) return;
        auto caret = token.find('^');
        Integer base(token.substr(0, caret));
        std::uint64_t exp = caret == std::string::npos ? 1 : std::stoull(token.substr(caret + 1));
        if (base != 1) out[base] += exp;
        token.clear();
    };
    for (char c : text) {
        if (c == '*' || c == '.' || c == ' ') flush();
        else if ((c >= '0' && c <= '9') || c == '^') token.push_back(c);
        else throw Error(ErrorCode::ParseError, "bad factorization text: " + std::string(text));
    }
    flush();
    return out;
}

struct FactorOptions {
    std::uint32_t trial_bound = 1'000'000;
    std::uint64_t rho_iterations = 2'000'000;
    std::uint64_t seed = 1;
};

struct FactorResult {
    PrimePowers primes;
    /// Composite cofactors that resisted splitting within the budget.
    std::vector<Integer> unfactored;
    bool complete() const { return unfactored.empty(); }
};

namespace detail {

/// Brent's variant of Pollard's rho. Returns a nontrivial factor or nothing.
inline std::optional<Integer> pollard_brent(const Integer& n, std::uint64_t budget, std::mt19937_64& rng) {
    if (n % 2 == 0) return Integer(2);
    gmp_randclass gr(gmp_randinit_default);
    gr.seed(static_cast<unsigned long>(rng()));
    std::uint64_t spent = 0;
    while (spent < budget) {
        Integer y = gr.get_z_range(n - 1) + 1;
        Integer c = gr.get_z_range(n - 1) + 1;
        const std::uint64_t m = 128;
        Integer g = 1, r = 1, q = 1, x, ys;
        do {
            x = y;
            for (Integer i = 0; i < r; ++i) y = (y * y + c) % n;
            Integer k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (std::uint64_t i = 0; i < m && k + i < r; ++i) {
                    y = (y * y + c) % n;
                    Integer diff = x - y;
                    q = (q * abs(diff)) % n;
                }
                g = gcd(q, n);
                k += m;
                spent += m;
            }
            r *= 2;
        } while (g == 1 && spent < budget);
        if (g == n) {
            do {
                ys = (ys * ys + c) % n;
                g = gcd(abs(x - ys), n);
            } while (g == 1);
        }
        if (g != n && g != 1) return g;
    }
    return std::nullopt;
}

inline Integer perfect_power_root(const Integer& n, unsigned long& exponent) {
    for (unsigned long k = 63; k >= 2; --k) {
        Integer r;
        if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k) != 0) {
            exponent = k;
            return r;
        }
    }
    exponent = 1;
    return n;
}

}  // namespace detail

/// Trial division up to opts.trial_bound, then Brent-Pollard rho on the
/// remaining composite cofactors. Cofactors that resist are reported, never
/// silently treated as prime.
inline FactorResult factor(Integer n, const FactorOptions& opts = {}) {
    FactorResult res;
    n = abs(n);
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "cannot factor zero");
    for (std::uint32_t p : primes_up_to(std::min<std::uint32_t>(opts.trial_bound, 1u << 24))) {
        if (n == 1) break;
        const Integer pz = p;
        if (pz * pz > n) break;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            ++res.primes[pz];
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        }
    }
    std::mt19937_64 rng(opts.seed);
    std::vector<std::pair<Integer, std::uint64_t>> stack;
    if (n > 1) stack.emplace_back(n, 1);
    while (!stack.empty()) {
        auto [m, mult] = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (is_probable_prime(m)) {
            res.primes[m] += mult;
            continue;
        }
        unsigned long k = 1;
        Integer root = detail::perfect_power_root(m, k);
        if (k > 1) {
            stack.emplace_back(root, mult * k);
            continue;
        }
        auto d = detail::pollard_brent(m, opts.rho_iterations, rng);
        if (!d) {
            res.unfactored.push_back(m);
            continue;
        }
        Integer other = m / *d;
        stack.emplace_back(*d, mult);
        stack.emplace_back(other, mult);
    }
    return res;
}

inline std::set<Integer> prime_divisors(const Integer& n, const FactorOptions& opts = {}) {
    FactorResult r = factor(n, opts);
    if (!r.complete())
        throw Error(ErrorCode::FactorizationIncomplete, "could not split cofactor " + r.unfactored.front().get_str());
    return support(r.primes);
}

inline std::uint64_t ipow(std::uint64_t base, unsigned exp) {
    std::uint64_t r = 1;
    while (exp--) r *= base;
    return r;
}

}  // namespace hgm
