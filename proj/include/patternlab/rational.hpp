#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace patternlab {

// Exact arithmetic carriers. mpq_class keeps values canonical (den > 0,
// gcd(|num|,den) = 1) through all arithmetic, which the cumulant sums rely on.
using BigInt = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// "p/q" (or just "p" for integers), the exact-output CLI format.
inline std::string rational_str(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational parse_rational(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw parse_error("bad rational: '" + s + "'");
    q.canonicalize();
    return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

inline BigInt factorial(unsigned n) {
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

inline BigInt binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return BigInt(0);
    BigInt b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return b;
}

// n! / (k_1! k_2! ...), zero if any k_i < 0 or the parts overshoot n.
inline BigInt multinomial(long n, const std::vector<long>& parts) {
    long s = 0;
    for (long k : parts) {
        if (k < 0) return BigInt(0);
        s += k;
    }
    if (s > n || n < 0) return BigInt(0);
    BigInt r = factorial(static_cast<unsigned>(n));
    for (long k : parts) r /= factorial(static_cast<unsigned>(k));
    if (s < n) r /= factorial(static_cast<unsigned>(n - s));  // implicit remainder part
    return r;
}

}  // namespace patternlab
