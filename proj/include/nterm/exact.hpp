#pragma once

// Exact integer and rational arithmetic used by every norm and inequality
// check in the library.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace nterm {

using BigInt = mpz_class;
using Rational = mpq_class;

// Accepts "7", "-3/4", "0.125", "1e3" is rejected.
Rational parse_rational(std::string_view text);
BigInt parse_bigint(std::string_view text);

// "p/q" in lowest terms, or "p" when q == 1.
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

Rational pow_int(const Rational& base, unsigned exponent);
double to_double(const Rational& value);
double to_double(const BigInt& value);

// Requires value < 2^64.
std::uint64_t to_u64(const BigInt& value);
bool fits_u64(const BigInt& value);

// Floor of the square root of a nonnegative integer.
BigInt isqrt(const BigInt& value);

// Sign of sqrt(u) - sqrt(w) - e for rationals u, w >= 0, decided exactly.
int sign_sqrt_difference(const Rational& u, const Rational& w,
                         const Rational& e);

// Sign of sqrt(u) - sqrt(w).
inline int compare_sqrt(const Rational& u, const Rational& w) {
  return sgn(Rational(u - w));
}

}  // namespace nterm
