#pragma once

// Arbitrary-precision number helpers shared by every module: exception
// types, rational parsing/formatting, and overflow-free logarithms of
// big integers and rationals.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chamberwalk {

using Integer = mpz_class;
using Rational = mpq_class;

/// Invalid input: bad point, bad spec, pole configuration, parity misuse.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computation refused because it would exceed its state budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Not enough data to produce a diagnostic (e.g. too few grid points).
class DiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace detail

/// Parses "p", "-p" or "p/q" into a canonical rational.
inline Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+'))
    body.remove_prefix(1);
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den =
      slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!detail::all_digits(num) || !detail::all_digits(den))
    throw DomainError("malformed rational: '" + std::string(text) + "'");
  Integer d(std::string(den), 10);
  if (d == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
  Rational r(Integer(std::string(num), 10), d);
  r.canonicalize();
  if (!text.empty() && text.front() == '-') r = -r;
  return r;
}

/// num/den in canonical form (gmpxx does not canonicalize on construction).
inline Rational ratio(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& r) { return r.get_str(10); }
inline std::string to_string(const Integer& z) { return z.get_str(10); }

/// Natural log of a positive big integer without converting through double.
inline double log_abs(const Integer& z) {
  if (z == 0) return -std::numeric_limits<double>::infinity();
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::numbers::ln2;
}

inline double log_abs(const Rational& q) {
  if (q == 0) return -std::numeric_limits<double>::infinity();
  long e_num = 0, e_den = 0;
  const double m_num = mpz_get_d_2exp(&e_num, q.get_num_mpz_t());
  const double m_den = mpz_get_d_2exp(&e_den, q.get_den_mpz_t());
  // The exponent difference is exact, so ratios near 1 keep full precision.
  return std::log(std::fabs(m_num / m_den)) + static_cast<double>(e_num - e_den) * std::numbers::ln2;
}

inline Integer binomial(long n, long r) {
  if (r < 0 || n < 0 || r > n) return 0;
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(r));
  return out;
}

inline Integer factorial(unsigned long n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

/// q^e for integer e of either sign.
inline Rational pow(const Rational& q, long e) {
  if (e < 0) {
    if (q == 0) throw DomainError("negative power of zero");
    Rational inv = 1 / q;
    return pow(inv, -e);
  }
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(e));
  return ratio(num, den);
}

inline Integer pow(const Integer& z, unsigned long e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), z.get_mpz_t(), e);
  return out;
}

inline double log_factorial(unsigned long n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace chamberwalk
