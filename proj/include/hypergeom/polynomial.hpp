#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hypergeom/scalar.hpp"

namespace hgm {

/// Dense univariate integer polynomial, coefficients stored from t^0 upward.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<Integer> coeffs) : c_(std::move(coeffs)) { trim(); }

    static IntPoly constant(const Integer& a) { return IntPoly({a}); }
    static IntPoly monomial(std::size_t deg, const Integer& a = 1) {
        std::vector<Integer> c(deg + 1, 0);
        c[deg] = a;
        return IntPoly(std::move(c));
    }

    bool is_zero() const noexcept { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
    Integer coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Integer(0); }
    const Integer& leading() const { return c_.back(); }
    const std::vector<Integer>& coefficients() const noexcept { return c_; }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const IntPoly& a, const IntPoly& b) { return a.c_ != b.c_; }
    friend bool operator<(const IntPoly& a, const IntPoly& b) {
        if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
        for (std::size_t i = a.c_.size(); i-- > 0;)
            if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
        return false;
    }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
        std::vector<Integer> c(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return IntPoly(std::move(c));
    }
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
        std::vector<Integer> c(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
        return IntPoly(std::move(c));
    }
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Integer> c(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return IntPoly(std::move(c));
    }

    /// Division by a monic polynomial: returns (quotient, remainder).
    std::pair<IntPoly, IntPoly> divmod(const IntPoly& d) const {
        if (!d.is_monic()) throw Error(ErrorCode::InvalidArgument, "divisor must be monic");
        std::vector<Integer> r = c_;
        const long dd = d.degree();
        if (degree() < dd) return {IntPoly(), *this};
        std::vector<Integer> q(static_cast<std::size_t>(degree() - dd + 1), 0);
        for (long i = degree(); i >= dd; --i) {
            const Integer f = r[static_cast<std::size_t>(i)];
            if (f == 0) continue;
            q[static_cast<std::size_t>(i - dd)] = f;
            for (long j = 0; j <= dd; ++j) r[static_cast<std::size_t>(i - dd + j)] -= f * d.c_[static_cast<std::size_t>(j)];
        }
        return {IntPoly(std::move(q)), IntPoly(std::move(r))};
    }

    /// Exact quotient; throws when d does not divide *this.
    IntPoly exact_div(const IntPoly& d) const {
        auto [q, r] = divmod(d);
        if (!r.is_zero()) throw Error(ErrorCode::InvalidArgument, "polynomial division is not exact");
        return q;
    }

    bool divisible_by(const IntPoly& d) const { return divmod(d).second.is_zero(); }

    /// t^deg * p(1/t).
    IntPoly reversal() const { return IntPoly(std::vector<Integer>(c_.rbegin(), c_.rend())); }

    Integer evaluate(const Integer& x) const {
        Integer r = 0;
        for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }

    /// Renders e.g. `t^6-t^3+1`.
    std::string to_string(const char* var = "t") const {
        if (c_.empty()) return "0";
        std::string out;
        for (std::size_t i = c_.size(); i-- > 0;) {
            const Integer& a = c_[i];
            if (a == 0) continue;
            Integer mag = abs(a);
            if (a < 0) out += '-';
            else if (!out.empty()) out += '+';
            if (i == 0 || mag != 1) out += mag.get_str();
            if (i > 0) {
                out += var;
                if (i > 1) out += '^' + std::to_string(i);
            }
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Integer> c_;
};

inline std::uint64_t euler_phi(std::uint64_t k) {
    std::uint64_t r = k;
    for (std::uint64_t p = 2; p * p <= k; ++p) {
        if (k % p) continue;
        while (k % p == 0) k /= p;
        r -= r / p;
    }
    if (k > 1) r -= r / k;
    return r;
}

/// The k-th cyclotomic polynomial, by exact division of t^k - 1 by Phi_d for proper divisors d.
inline IntPoly cyclotomic(std::uint64_t k) {
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "cyclotomic index must be positive");
    static std::mutex mu;
    static std::map<std::uint64_t, IntPoly> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
    }
    IntPoly p = IntPoly::monomial(k) - IntPoly::constant(1);
    for (std::uint64_t d = 1; d < k; ++d)
        if (k % d == 0) p = p.exact_div(cyclotomic(d));
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(k, p);
    return p;
}

/// Indices k with phi(k) <= bound, ascending.
inline std::vector<std::uint64_t> cyclotomic_indices_up_to_degree(std::uint64_t bound) {
    std::vector<std::uint64_t> out;
    // phi(k) >= sqrt(k/2), so k <= 2*bound^2 covers every candidate.
    for (std::uint64_t k = 1; k <= 2 * bound * bound + 2; ++k)
        if (euler_phi(k) <= bound) out.push_back(k);
    return out;
}

/// Multiset of cyclotomic indices: k -> multiplicity.
using CyclotomicFactors = std::map<std::uint64_t, unsigned>;

inline IntPoly cyclotomic_product(const CyclotomicFactors& f) {
    IntPoly p = IntPoly::constant(1);
    for (const auto& [k, m] : f)
        for (unsigned i = 0; i < m; ++i) p = p * cyclotomic(k);
    return p;
}

/// Factorization of a monic polynomial into cyclotomic factors by trial
/// division; nothing if a non-cyclotomic factor remains.
inline std::optional<CyclotomicFactors> cyclotomic_factorization(IntPoly p) {
    if (!p.is_monic()) return std::nullopt;
    CyclotomicFactors out;
    for (std::uint64_t k : cyclotomic_indices_up_to_degree(static_cast<std::uint64_t>(p.degree()))) {
        const IntPoly c = cyclotomic(k);
        while (p.degree() >= c.degree()) {
            auto [q, r] = p.divmod(c);
            if (!r.is_zero()) break;
            ++out[k];
            p = q;
        }
    }
    if (p.degree() != 0) return std::nullopt;
    return out;
}

}  // namespace hgm
