#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hypergeom/scalar.hpp"

namespace hgm {

/// Dense row-major matrix with value semantics.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw Error(ErrorCode::InvalidArgument, "ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<T>& data() const noexcept { return data_; }
    std::vector<T>& data() noexcept { return data_; }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        check_same_shape(a, b);
        Matrix r = a;
        for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] += b.data_[k];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        check_same_shape(a, b);
        Matrix r = a;
        for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] -= b.data_[k];
        return r;
    }
    friend Matrix operator-(const Matrix& a) {
        Matrix r = a;
        for (auto& x : r.data_) x = -x;
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw Error(ErrorCode::InvalidArgument, "matrix product shape mismatch");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }
    friend Matrix operator*(const T& s, const Matrix& a) {
        Matrix r = a;
        for (auto& x : r.data_) x *= s;
        return r;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == 0; });
    }
    bool is_identity() const { return square() && *this == identity(rows_); }

private:
    static void check_same_shape(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw Error(ErrorCode::InvalidArgument, "matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RatMatrix = Matrix<Rational>;
using IntMatrix = Matrix<Integer>;
using RatVector = std::vector<Rational>;
using IntVector = std::vector<Integer>;

template <class T>
std::ostream& operator<<(std::ostream& os, const Matrix<T>& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
        os << ']';
    }
    return os << ']';
}

template <class T>
std::string to_string(const Matrix<T>& m) {
    std::ostringstream os;
    os << m;
    return os.str();
}

/// The standard alternating form J_n = [[0, 1_s], [-1_s, 0]], n = 2s.
template <class T = Rational>
Matrix<T> standard_form(std::size_t n) {
    if (n % 2 != 0) throw Error(ErrorCode::UnsupportedDegree, "symplectic dimension must be even");
    const std::size_t s = n / 2;
    Matrix<T> j(n, n);
    for (std::size_t i = 0; i < s; ++i) {
        j(i, s + i) = T(1);
        j(s + i, i) = T(-1);
    }
    return j;
}

template <class T>
Matrix<T> matrix_power(Matrix<T> base, unsigned long long e) {
    Matrix<T> r = Matrix<T>::identity(base.rows());
    while (e) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

inline RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t k = 0; k < m.data().size(); ++k) r.data()[k] = Rational(m.data()[k]);
    return r;
}

inline bool is_integral(const RatMatrix& m) {
    return std::all_of(m.data().begin(), m.data().end(), [](const Rational& q) { return q.get_den() == 1; });
}

/// Converts an integral rational matrix; throws NotIntegral otherwise.
inline IntMatrix to_integer(const RatMatrix& m) {
    IntMatrix r(m.rows(), m.cols());
    for (std::size_t k = 0; k < m.data().size(); ++k) {
        if (m.data()[k].get_den() != 1) throw Error(ErrorCode::NotIntegral, "matrix has non-integral entries");
        r.data()[k] = m.data()[k].get_num();
    }
    return r;
}

inline Integer denominator_lcm(const RatMatrix& m) {
    Integer l = 1;
    for (const auto& q : m.data()) l = lcm(l, q.get_den());
    return l;
}

inline Integer denominator_lcm(const RatVector& v) {
    Integer l = 1;
    for (const auto& q : v) l = lcm(l, q.get_den());
    return l;
}

inline Integer content(const IntVector& v) {
    Integer g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g;
}

/// Max |entry| over a rational matrix.
inline Rational max_abs_entry(const RatMatrix& m) {
    Rational best = 0;
    for (const auto& q : m.data()) best = std::max(best, Rational(abs(q)));
    return best;
}

/// Scales a rational vector to integer entries with gcd 1 and first nonzero entry positive.
inline IntVector primitive_integral(const RatVector& v) {
    Integer d = denominator_lcm(v);
    IntVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(v[i] * d).get_num();
    Integer g = content(out);
    if (g == 0) return out;
    for (auto& x : out) x /= g;
    auto nz = std::find_if(out.begin(), out.end(), [](const Integer& x) { return x != 0; });
    if (nz != out.end() && *nz < 0)
        for (auto& x : out) x = -x;
    return out;
}

/// Fraction-free determinant (Bareiss) of an integer matrix.
inline Integer determinant(IntMatrix m) {
    if (!m.square()) throw Error(ErrorCode::InvalidArgument, "determinant of non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m(swap_row, k) == 0) ++swap_row;
            if (swap_row == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(swap_row, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m(i, j) = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

/// Exact determinant of a rational matrix, via row-wise denominator clearing.
inline Rational determinant(const RatMatrix& m) {
    IntMatrix im(m.rows(), m.cols());
    Integer scale = 1;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Integer d = 1;
        for (std::size_t j = 0; j < m.cols(); ++j) d = lcm(d, m(i, j).get_den());
        scale *= d;
        for (std::size_t j = 0; j < m.cols(); ++j) im(i, j) = Rational(m(i, j) * d).get_num();
    }
    return make_rational(determinant(im), scale);
}

/// Exact inverse by Gauss-Jordan elimination over Q.
inline std::optional<RatMatrix> try_inverse(const RatMatrix& m) {
    if (!m.square()) throw Error(ErrorCode::InvalidArgument, "inverse of non-square matrix");
    const std::size_t n = m.rows();
    RatMatrix a = m, inv = RatMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a(piv, c) == 0) ++piv;
        if (piv == n) return std::nullopt;
        if (piv != c)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(c, j), a(piv, j));
                std::swap(inv(c, j), inv(piv, j));
            }
        const Rational p = a(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) /= p;
            inv(c, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a(i, c) == 0) continue;
            const Rational f = a(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(c, j);
                inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

inline RatMatrix inverse(const RatMatrix& m) {
    auto inv = try_inverse(m);
    if (!inv) throw Error(ErrorCode::InvalidArgument, "matrix is singular");
    return *inv;
}

namespace detail {

/// Fraction-free row echelon form of the rows of m (each row cleared of
/// denominators and kept primitive). Returns the nonzero echelon rows and
/// their pivot columns.
inline std::pair<std::vector<IntVector>, std::vector<std::size_t>> integer_echelon(const RatMatrix& m) {
    std::vector<IntVector> rows;
    rows.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        RatVector r = m.row(i);
        IntVector v(r.size());
        Integer d = denominator_lcm(r);
        for (std::size_t j = 0; j < r.size(); ++j) v[j] = Rational(r[j] * d).get_num();
        rows.push_back(std::move(v));
    }
    std::vector<std::size_t> pivots;
    std::size_t next = 0;
    for (std::size_t c = 0; c < m.cols() && next < rows.size(); ++c) {
        std::size_t piv = next;
        while (piv < rows.size() && rows[piv][c] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[next], rows[piv]);
        for (std::size_t i = next + 1; i < rows.size(); ++i) {
            if (rows[i][c] == 0) continue;
            const Integer a = rows[next][c], b = rows[i][c];
            for (std::size_t j = c; j < m.cols(); ++j) rows[i][j] = a * rows[i][j] - b * rows[next][j];
            Integer g = content(rows[i]);
            if (g > 1)
                for (auto& x : rows[i]) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
        }
        pivots.push_back(c);
        ++next;
    }
    rows.resize(next);
    return {rows, pivots};
}

}  // namespace detail

inline std::size_t rank(const RatMatrix& m) { return detail::integer_echelon(m).second.size(); }

/// Basis of the right null space {x : m x = 0}, each vector primitive integral
/// with first nonzero entry positive.
inline std::vector<IntVector> rational_kernel(const RatMatrix& m) {
    auto [rows, pivots] = detail::integer_echelon(m);
    const std::size_t n = m.cols();
    // Back-substitute into reduced echelon form over Q.
    std::vector<RatVector> red(rows.size(), RatVector(n));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) red[i][j] = make_rational(rows[i][j], rows[i][pivots[i]]);
    for (std::size_t i = rows.size(); i-- > 0;) {
        for (std::size_t k = 0; k < i; ++k) {
            const Rational f = red[k][pivots[i]];
            if (f == 0) continue;
            for (std::size_t j = 0; j < n; ++j) red[k][j] -= f * red[i][j];
        }
    }
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<IntVector> basis;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        RatVector v(n);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -red[i][free];
        basis.push_back(primitive_integral(v));
    }
    return basis;
}

/// Incremental linear span over Q, stored as fraction-free primitive rows.
class RationalSpan {
public:
    explicit RationalSpan(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return rows_.size(); }

    /// Adds v to the span; returns true when it increased the dimension.
    bool add(const RatVector& v) {
        IntVector w = reduce(v);
        auto nz = std::find_if(w.begin(), w.end(), [](const Integer& x) { return x != 0; });
        if (nz == w.end()) return false;
        pivots_.push_back(static_cast<std::size_t>(nz - w.begin()));
        rows_.push_back(std::move(w));
        return true;
    }

    bool contains(const RatVector& v) const {
        IntVector w = reduce(v);
        return std::all_of(w.begin(), w.end(), [](const Integer& x) { return x == 0; });
    }

private:
    IntVector reduce(const RatVector& v) const {
        if (v.size() != dim_) throw Error(ErrorCode::InvalidArgument, "vector length mismatch");
        Integer d = denominator_lcm(v);
        IntVector w(dim_);
        for (std::size_t j = 0; j < dim_; ++j) w[j] = Rational(v[j] * d).get_num();
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const std::size_t c = pivots_[i];
            if (w[c] == 0) continue;
            const Integer a = rows_[i][c], b = w[c];
            for (std::size_t j = 0; j < dim_; ++j) w[j] = a * w[j] - b * rows_[i][j];
            Integer g = content(w);
            if (g > 1)
                for (auto& x : w) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
        }
        return w;
    }

    std::size_t dim_;
    std::vector<IntVector> rows_;
    std::vector<std::size_t> pivots_;
};

/// Incremental linear span over F_p (p prime, p < 2^32).
class ModularSpan {
public:
    ModularSpan(std::size_t dim, std::uint64_t p) : dim_(dim), p_(p) {}

    std::size_t size() const noexcept { return rows_.size(); }

    bool add(std::vector<std::uint64_t> w) {
        reduce(w);
        auto nz = std::find_if(w.begin(), w.end(), [](std::uint64_t x) { return x != 0; });
        if (nz == w.end()) return false;
        const std::size_t c = static_cast<std::size_t>(nz - w.begin());
        const std::uint64_t inv = inverse_mod(w[c]);
        for (auto& x : w) x = x * inv % p_;
        pivots_.push_back(c);
        rows_.push_back(std::move(w));
        return true;
    }

    bool contains(std::vector<std::uint64_t> w) const {
        reduce(w);
        return std::all_of(w.begin(), w.end(), [](std::uint64_t x) { return x == 0; });
    }

    /// Reduces w against the stored rows; w becomes the residue.
    void reduce(std::vector<std::uint64_t>& w) const {
        if (w.size() != dim_) throw Error(ErrorCode::InvalidArgument, "vector length mismatch");
        for (auto& x : w) x %= p_;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const std::uint64_t f = w[pivots_[i]];
            if (f == 0) continue;
            for (std::size_t j = 0; j < dim_; ++j) w[j] = (w[j] + (p_ - f) * rows_[i][j]) % p_;
        }
    }

private:
    std::uint64_t inverse_mod(std::uint64_t a) const {
        std::uint64_t r = 1, b = a, e = p_ - 2;
        while (e) {
            if (e & 1) r = static_cast<std::uint64_t>(static_cast<unsigned __int128>(r) * b % p_);
            b = static_cast<std::uint64_t>(static_cast<unsigned __int128>(b) * b % p_);
            e >>= 1;
        }
        return r;
    }

    std::size_t dim_;
    std::uint64_t p_;
    std::vector<std::vector<std::uint64_t>> rows_;
    std::vector<std::size_t> pivots_;
};

/// Which field a span dimension is computed over.
struct Field {
    std::uint64_t characteristic = 0;  ///< 0 for Q, otherwise a prime p.
    static Field rationals() { return {}; }
    static Field prime(std::uint64_t p) { return {p}; }
};

/// Exact rank of a list of equal-length rational vectors over Q or F_p.
inline std::size_t span_dimension(const std::vector<RatVector>& vectors, Field field) {
    if (vectors.empty()) return 0;
    const std::size_t dim = vectors.front().size();
    for (const auto& v : vectors)
        if (v.size() != dim) throw Error(ErrorCode::InvalidArgument, "vectors of unequal length");
    if (field.characteristic == 0) {
        RationalSpan span(dim);
        for (const auto& v : vectors) span.add(v);
        return span.size();
    }
    ModularSpan span(dim, field.characteristic);
    for (const auto& v : vectors) {
        std::vector<std::uint64_t> w(dim);
        for (std::size_t j = 0; j < dim; ++j) w[j] = reduce_mod(v[j], field.characteristic);
        span.add(std::move(w));
    }
    return span.size();
}

inline RatVector flatten(const RatMatrix& m) { return m.data(); }

/// Row-style Hermite normal form of the row lattice of an integer matrix:
/// upper echelon, positive pivots, entries above each pivot reduced into
/// [0, pivot). Zero rows are dropped.
inline IntMatrix hermite_normal_form(const IntMatrix& m) {
    std::vector<IntVector> rows;
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
    const std::size_t n = m.cols();
    std::size_t next = 0;
    std::vector<std::size_t> pivot_cols;
    for (std::size_t c = 0; c < n && next < rows.size(); ++c) {
        // Euclid down the column until a single nonzero entry remains at `next`.
        while (true) {
            std::size_t best = rows.size();
            for (std::size_t i = next; i < rows.size(); ++i)
                if (rows[i][c] != 0 && (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c]))) best = i;
            if (best == rows.size()) break;
            std::swap(rows[next], rows[best]);
            bool done = true;
            for (std::size_t i = next + 1; i < rows.size(); ++i) {
                if (rows[i][c] == 0) continue;
                Integer q;
                mpz_tdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[next][c].get_mpz_t());
                for (std::size_t j = c; j < n; ++j) rows[i][j] -= q * rows[next][j];
                if (rows[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (next == rows.size() || rows[next][c] == 0) continue;
        if (rows[next][c] < 0)
            for (auto& x : rows[next]) x = -x;
        for (std::size_t i = 0; i < next; ++i) {
            Integer q = floor_div(rows[i][c], rows[next][c]);
            if (q != 0)
                for (std::size_t j = c; j < n; ++j) rows[i][j] -= q * rows[next][j];
        }
        pivot_cols.push_back(c);
        ++next;
    }
    IntMatrix out(next, n);
    for (std::size_t i = 0; i < next; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = rows[i][j];
    return out;
}

}  // namespace hgm
