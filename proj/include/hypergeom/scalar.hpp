#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "hypergeom/error.hpp"

namespace hgm {

using Integer = mpz_class;
using Rational = mpq_class;

/// Builds num/den in lowest terms with a positive denominator.
inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Floor division for integers (rounds toward negative infinity).
inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

/// Non-negative remainder of a modulo m (m > 0).
inline Integer mod_floor(const Integer& a, const Integer& m) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline std::uint64_t to_u64(const Integer& a) {
    if (a < 0 || mpz_sizeinbase(a.get_mpz_t(), 2) > 64)
        throw Error(ErrorCode::InvalidArgument, "integer does not fit in 64 bits: " + a.get_str());
    return static_cast<std::uint64_t>(mpz_get_ui(a.get_mpz_t()));
}

inline Integer from_u64(std::uint64_t v) {
    Integer r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return r;
}

/// Reduction of a rational into Z/m. Throws when the denominator is not a unit mod m.
inline std::uint64_t reduce_mod(const Rational& q, std::uint64_t m) {
    const Integer mz = from_u64(m);
    Integer num = mod_floor(q.get_num(), mz);
    if (q.get_den() == 1) return to_u64(num);
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), q.get_den().get_mpz_t(), mz.get_mpz_t()) == 0)
        throw Error(ErrorCode::DenominatorNotInvertible,
                    "denominator " + q.get_den().get_str() + " is not invertible mod " + std::to_string(m));
    return to_u64(mod_floor(num * inv, mz));
}

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

}  // namespace hgm
