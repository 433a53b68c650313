#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "hypergeom/matrix.hpp"

namespace hgm {

inline constexpr std::size_t kMaxDim = 8;

/// Square matrix over Z/m with m < 2^32, stored inline. Entries are kept in [0, m).
class ModMatrix {
public:
    ModMatrix() = default;
    ModMatrix(std::size_t n, std::uint64_t modulus) : n_(static_cast<std::uint8_t>(n)), m_(modulus) {
        if (n > kMaxDim) throw Error(ErrorCode::UnsupportedDegree, "dimension exceeds kMaxDim");
        if (modulus < 1 || modulus >= (1ULL << 32)) throw Error(ErrorCode::InvalidArgument, "modulus out of range");
        a_.fill(0);
    }

    static ModMatrix identity(std::size_t n, std::uint64_t modulus) {
        ModMatrix r(n, modulus);
        for (std::size_t i = 0; i < n; ++i) r.a_[i * kMaxDim + i] = static_cast<std::uint32_t>(1 % modulus);
        return r;
    }

    /// Reduction of a rational matrix; throws DenominatorNotInvertible.
    static ModMatrix reduce(const RatMatrix& q, std::uint64_t modulus) {
        ModMatrix r(q.rows(), modulus);
        for (std::size_t i = 0; i < q.rows(); ++i)
            for (std::size_t j = 0; j < q.cols(); ++j) r.set(i, j, reduce_mod(q(i, j), modulus));
        return r;
    }

    static ModMatrix reduce(const IntMatrix& z, std::uint64_t modulus) {
        ModMatrix r(z.rows(), modulus);
        const Integer mz = from_u64(modulus);
        for (std::size_t i = 0; i < z.rows(); ++i)
            for (std::size_t j = 0; j < z.cols(); ++j) r.set(i, j, to_u64(mod_floor(z(i, j), mz)));
        return r;
    }

    std::size_t dim() const noexcept { return n_; }
    std::uint64_t modulus() const noexcept { return m_; }

    std::uint64_t operator()(std::size_t i, std::size_t j) const { return a_[i * kMaxDim + j]; }
    void set(std::size_t i, std::size_t j, std::uint64_t v) { a_[i * kMaxDim + j] = static_cast<std::uint32_t>(v % m_); }

    friend ModMatrix operator*(const ModMatrix& x, const ModMatrix& y) {
        ModMatrix r(x.n_, x.m_);
        const std::size_t n = x.n_;
        if (x.m_ < (1u << 29)) {
            // n * m^2 < 2^64 for n <= 8.
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    std::uint64_t acc = 0;
                    for (std::size_t k = 0; k < n; ++k)
                        acc += static_cast<std::uint64_t>(x.a_[i * kMaxDim + k]) * y.a_[k * kMaxDim + j];
                    r.a_[i * kMaxDim + j] = static_cast<std::uint32_t>(acc % x.m_);
                }
            return r;
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                unsigned __int128 acc = 0;
                for (std::size_t k = 0; k < n; ++k)
                    acc += static_cast<std::uint64_t>(x.a_[i * kMaxDim + k]) * y.a_[k * kMaxDim + j];
                r.a_[i * kMaxDim + j] = static_cast<std::uint32_t>(acc % x.m_);
            }
        return r;
    }

    friend bool operator==(const ModMatrix& x, const ModMatrix& y) {
        if (x.n_ != y.n_ || x.m_ != y.m_) return false;
        for (std::size_t i = 0; i < x.n_; ++i)
            for (std::size_t j = 0; j < x.n_; ++j)
                if (x.a_[i * kMaxDim + j] != y.a_[i * kMaxDim + j]) return false;
        return true;
    }
    friend bool operator!=(const ModMatrix& x, const ModMatrix& y) { return !(x == y); }

    bool is_identity() const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (a_[i * kMaxDim + j] != (i == j ? 1 % m_ : 0)) return false;
        return true;
    }

    /// Same matrix read modulo a divisor of the current modulus.
    ModMatrix reduced(std::uint64_t divisor) const {
        if (divisor == 0 || m_ % divisor != 0) throw Error(ErrorCode::InvalidArgument, "not a divisor of the modulus");
        ModMatrix r(n_, divisor);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) r.a_[i * kMaxDim + j] = static_cast<std::uint32_t>(a_[i * kMaxDim + j] % divisor);
        return r;
    }

    ModMatrix power(std::uint64_t e) const {
        ModMatrix r = identity(n_, m_), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }

    ModMatrix transpose() const {
        ModMatrix r(n_, m_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) r.a_[j * kMaxDim + i] = a_[i * kMaxDim + j];
        return r;
    }

    /// Inverse of a symplectic matrix: g^{-1} = -J g^T J.
    ModMatrix symplectic_inverse() const {
        const std::size_t s = n_ / 2;
        ModMatrix r(n_, m_);
        // For g = [[A, B], [C, D]]: g^{-1} = [[D^T, -B^T], [-C^T, A^T]].
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j) {
                r.a_[i * kMaxDim + j] = a_[(s + j) * kMaxDim + (s + i)];
                r.a_[i * kMaxDim + s + j] = neg(a_[j * kMaxDim + (s + i)]);
                r.a_[(s + i) * kMaxDim + j] = neg(a_[(s + j) * kMaxDim + i]);
                r.a_[(s + i) * kMaxDim + s + j] = a_[j * kMaxDim + i];
            }
        return r;
    }

    bool preserves_standard_form() const {
        ModMatrix j = standard(n_, m_);
        return (*this) * j * transpose() == j;
    }

    static ModMatrix standard(std::size_t n, std::uint64_t modulus) {
        ModMatrix j(n, modulus);
        const std::size_t s = n / 2;
        for (std::size_t i = 0; i < s; ++i) {
            j.set(i, s + i, 1);
            j.set(s + i, i, modulus - 1);
        }
        return j;
    }

    /// Row vector times matrix, reduced modulo `mod` (a divisor of the matrix modulus).
    void act(const std::uint32_t* v, std::uint32_t* out, std::uint64_t mod) const {
        for (std::size_t j = 0; j < n_; ++j) {
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < n_; ++k) acc += static_cast<std::uint64_t>(v[k]) * (a_[k * kMaxDim + j] % mod);
            out[j] = static_cast<std::uint32_t>(acc % mod);
        }
    }

    IntMatrix to_integer_matrix() const {
        IntMatrix r(n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) r(i, j) = static_cast<unsigned long>(a_[i * kMaxDim + j]);
        return r;
    }

    std::size_t hash() const {
        std::size_t h = 1469598103934665603ULL;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) h = (h ^ a_[i * kMaxDim + j]) * 1099511628211ULL;
        return h;
    }

private:
    std::uint32_t neg(std::uint32_t x) const { return x == 0 ? 0 : static_cast<std::uint32_t>(m_ - x); }

    std::uint8_t n_ = 0;
    std::uint64_t m_ = 1;
    std::array<std::uint32_t, kMaxDim * kMaxDim> a_{};
};

struct ModMatrixHash {
    std::size_t operator()(const ModMatrix& m) const { return m.hash(); }
};

}  // namespace hgm
