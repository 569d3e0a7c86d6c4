#include "nterm/exact.hpp"

#include <cctype>

#include "nterm/errors.hpp"

namespace nterm {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

BigInt parse_bigint(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    body.remove_prefix(1);
  }
  if (!all_digits(body)) {
    throw InvalidArgument("not an integer: '" + std::string(text) + "'");
  }
  return BigInt(std::string(text.front() == '+' ? text.substr(1) : text), 10);
}

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw InvalidArgument("empty rational");
  bool negative = false;
  std::string_view body = text;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw InvalidArgument("not a rational: '" + std::string(text) + "'");
    }
    BigInt d(std::string(den), 10);
    if (d == 0) throw InvalidArgument("zero denominator: '" + std::string(text) + "'");
    result = Rational(BigInt(std::string(num), 10), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw InvalidArgument("not a decimal: '" + std::string(text) + "'");
    }
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    BigInt digits(std::string(whole) + std::string(frac), 10);
    result = Rational(digits, scale);
  } else {
    if (!all_digits(body)) {
      throw InvalidArgument("not a rational: '" + std::string(text) + "'");
    }
    result = Rational(BigInt(std::string(body), 10));
  }
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

std::string to_string(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_str();
}

std::string to_string(const BigInt& value) { return value.get_str(); }

Rational pow_int(const Rational& base, unsigned exponent) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

double to_double(const Rational& value) { return value.get_d(); }
double to_double(const BigInt& value) { return value.get_d(); }

bool fits_u64(const BigInt& value) {
  return value >= 0 && mpz_sizeinbase(value.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const BigInt& value) {
  if (!fits_u64(value)) {
    throw InvalidArgument("integer does not fit 64 bits: " + value.get_str());
  }
  static_assert(sizeof(unsigned long) == 8);
  return mpz_get_ui(value.get_mpz_t());
}

BigInt isqrt(const BigInt& value) {
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), value.get_mpz_t());
  return r;
}

int sign_sqrt_difference(const Rational& u, const Rational& w,
                         const Rational& e) {
  if (sgn(u) < 0 || sgn(w) < 0) {
    throw InvalidArgument("square root of a negative rational");
  }
  if (sgn(e) < 0) {
    // sqrt(u) - sqrt(w) - e = -(sqrt(w) - sqrt(u) - |e|)
    return -sign_sqrt_difference(w, u, Rational(-e));
  }
  // e >= 0: compare sqrt(u) with sqrt(w) + e, both nonnegative.
  Rational rest = u - w - e * e;  // u - (sqrt(w)+e)^2 = rest - 2 e sqrt(w)
  if (sgn(e) == 0 || sgn(w) == 0) return sgn(rest);
  if (sgn(rest) <= 0) return -1;
  Rational lhs = rest * rest;
  Rational rhs = 4 * e * e * w;
  return sgn(Rational(lhs - rhs));
}

}  // namespace nterm
