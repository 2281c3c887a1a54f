#pragma once

// Exact and numeric checks of the determinant evaluations, character
// identities, determinant asymptotics and Selberg integrals used by the
// asymptotic analysis.
//
// Exact identities run in rational arithmetic. Half-integer powers
// z^{m-1/2} are kept rational by taking t with z = t^2, so z^{m-1/2} = t^{2m-1}.
// Float checks are templated on the real type and default to a 50-digit
// binary float: in double the k = 3 Gaussian determinant is already off by a
// percent at eps = 0.025 and is pure rounding noise at eps = 0.0125.

#include "chamberwalk/numeric.hpp"
#include "chamberwalk/stepmodel.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace chamberwalk {

using HighPrecision = boost::multiprecision::cpp_bin_float_50;

/// A square matrix of exact rationals, row-major.
class ExactMatrix {
 public:
  explicit ExactMatrix(std::size_t n) : n_(n), a_(n * n) {}
  explicit ExactMatrix(const std::vector<std::vector<Rational>>& rows) : n_(rows.size()), a_() {
    a_.reserve(n_ * n_);
    for (const auto& r : rows) {
      if (r.size() != n_) throw DomainError("matrix must be square");
      a_.insert(a_.end(), r.begin(), r.end());
    }
  }

  std::size_t size() const { return n_; }
  Rational& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<Rational> a_;
};

/// Exact determinant by fraction-free (Bareiss) elimination after clearing
/// the denominators of each row.
inline Rational det_exact(const ExactMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  std::vector<Integer> a(n * n);
  Integer scale = 1;
  for (std::size_t i = 0; i < n; ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < n; ++j)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m.at(i, j).get_den_mpz_t());
    scale *= l;
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = Integer(m.at(i, j) * l);
  }
  int sign = 1;
  Integer prev = 1;
  for (std::size_t p = 0; p + 1 < n; ++p) {
    if (a[p * n + p] == 0) {
      std::size_t r = p + 1;
      while (r < n && a[r * n + p] == 0) ++r;
      if (r == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a[p * n + j], a[r * n + j]);
      sign = -sign;
    }
    for (std::size_t i = p + 1; i < n; ++i) {
      for (std::size_t j = p + 1; j < n; ++j) {
        Integer t = a[i * n + j] * a[p * n + p] - a[i * n + p] * a[p * n + j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a[i * n + j] = std::move(t);
      }
      a[i * n + p] = 0;
    }
    prev = a[p * n + p];
  }
  Rational out = ratio(a[n * n - 1], scale);
  return sign < 0 ? Rational(-out) : out;
}

struct IdentityReport {
  std::string identity;
  nlohmann::json params = nlohmann::json::object();
  bool pass = false;
  /// Exact residual for exact identities, float otherwise.
  std::variant<Rational, double> residual = Rational(0);
  std::optional<int> sign;
  /// Extra numeric detail (estimates, targets, ratios).
  nlohmann::json details = nlohmann::json::object();
  std::string note;
};

inline nlohmann::json to_json(const IdentityReport& r) {
  nlohmann::json j;
  j["identity"] = r.identity;
  j["params"] = r.params;
  j["pass"] = r.pass;
  if (const auto* q = std::get_if<Rational>(&r.residual))
    j["residual"] = to_string(*q);
  else
    j["residual"] = std::get<double>(r.residual);
  if (r.sign) j["sign"] = *r.sign;
  if (!r.details.empty()) j["details"] = r.details;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

namespace detail {

inline nlohmann::json rational_list(const std::vector<Rational>& v) {
  auto out = nlohmann::json::array();
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

inline bool has_repeats(std::vector<Rational> v) {
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) != v.end();
}

inline std::vector<Rational> squares(const std::vector<Rational>& t) {
  std::vector<Rational> z;
  for (const auto& x : t) z.push_back(x * x);
  return z;
}

inline Rational product(const std::vector<Rational>& v) {
  Rational p = 1;
  for (const auto& x : v) p *= x;
  return p;
}

/// prod_{j<m} (z_j - z_m)(1 - z_j z_m)
inline Rational typeC_cross_product(const std::vector<Rational>& z) {
  Rational p = 1;
  for (std::size_t j = 0; j < z.size(); ++j)
    for (std::size_t m = j + 1; m < z.size(); ++m) p *= (z[j] - z[m]) * (1 - z[j] * z[m]);
  return p;
}

/// det(t_j^{e(m)} - t_j^{-e(m)}) for exponents e(0..k-1).
template <typename Exponent>
Rational antisym_det(const std::vector<Rational>& t, Exponent e) {
  const std::size_t k = t.size();
  ExactMatrix m(k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t c = 0; c < k; ++c) {
      const long p = e(c);
      m.at(j, c) = pow(t[j], p) - pow(t[j], -p);
    }
  return det_exact(m);
}

inline IdentityReport exact_report(std::string name, nlohmann::json params, const Rational& lhs, const Rational& rhs) {
  IdentityReport r;
  r.identity = std::move(name);
  r.params = std::move(params);
  r.residual = Rational(lhs - rhs);
  r.pass = lhs == rhs;
  r.details = {{"lhs", to_string(lhs)}, {"rhs", to_string(rhs)}};
  return r;
}

}  // namespace detail

/// det(z_j^m - z_j^{-m}) against its product formula; with `half_integer`
/// the inputs are t_j and the exponents are m - 1/2 in z_j = t_j^2.
inline IdentityReport check_typeC_det_identity(const std::vector<Rational>& input, bool half_integer) {
  const std::size_t k = input.size();
  if (k == 0) throw DomainError("need at least one coordinate");
  for (const auto& x : input)
    if (x == 0) throw DomainError("coordinates must be nonzero");
  const std::vector<Rational> z = half_integer ? detail::squares(input) : input;
  nlohmann::json params = {{"k", k}, {half_integer ? "t" : "z", detail::rational_list(input)}};
  const std::string name = half_integer ? "typeC_det_half_integer" : "typeC_det";

  if (detail::has_repeats(z)) {
    IdentityReport r = detail::exact_report(name, params, 0, 0);
    r.note = "degenerate: repeated coordinates, both sides vanish";
    return r;
  }
  const long kl = static_cast<long>(k);
  Rational lhs, rhs;
  if (!half_integer) {
    lhs = detail::antisym_det(z, [](std::size_t c) { return static_cast<long>(c + 1); });
    Rational tail = 1;
    for (const auto& x : z) tail *= x * x - 1;
    rhs = pow(detail::product(z), -kl) * detail::typeC_cross_product(z) * tail;
  } else {
    lhs = detail::antisym_det(input, [](std::size_t c) { return static_cast<long>(2 * c + 1); });
    Rational tail = 1;
    for (const auto& x : z) tail *= x - 1;
    rhs = pow(detail::product(input), -2 * kl + 1) * detail::typeC_cross_product(z) * tail;
  }
  return detail::exact_report(name, std::move(params), lhs, rhs);
}

/// Sum of Schur bialternants over 0 <= l_1 <= ... <= l_k <= 2c against the
/// odd orthogonal character ratio, in z_j = t_j^2.
inline IdentityReport schur_orthogonal_identity_check(const std::vector<Rational>& t, unsigned c) {
  const std::size_t k = t.size();
  if (k == 0) throw DomainError("need at least one coordinate");
  const std::vector<Rational> z = detail::squares(t);
  for (const auto& x : z)
    if (x == 0 || x == 1) throw DomainError("z_j = t_j^2 must avoid 0 and 1");
  if (detail::has_repeats(z)) throw DomainError("degenerate: coincident z values");
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t m = j + 1; m < k; ++m)
      if (z[j] * z[m] == 1) throw DomainError("degenerate: z_j z_m = 1 makes the character denominator vanish");

  ExactMatrix vdm(k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t m = 0; m < k; ++m) vdm.at(j, m) = pow(z[j], static_cast<long>(m));
  const Rational vdm_det = det_exact(vdm);

  Rational lhs = 0;
  std::vector<long> lambda(k, 0);
  const long top = 2 * static_cast<long>(c);
  while (true) {
    ExactMatrix m(k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t col = 0; col < k; ++col) m.at(j, col) = pow(z[j], lambda[col] + static_cast<long>(col));
    lhs += det_exact(m);
    // next weakly increasing sequence
    std::size_t i = k;
    while (i > 0 && lambda[i - 1] == top) --i;
    if (i == 0) break;
    const long v = lambda[i - 1] + 1;
    for (std::size_t r = i - 1; r < k; ++r) lambda[r] = v;
  }
  lhs /= vdm_det;

  const long cl = static_cast<long>(c);
  const Rational num = detail::antisym_det(t, [&](std::size_t m) { return static_cast<long>(2 * m + 1); });
  // t^{2(2c+m-1/2)} = t^{4c+2m-1} and t^{-(2m-1)}: not antisymmetric, build directly.
  ExactMatrix top_m(k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t m = 0; m < k; ++m) {
      const long e = static_cast<long>(2 * m + 1);
      top_m.at(j, m) = pow(t[j], 4 * cl + e) - pow(t[j], -e);
    }
  const Rational rhs = det_exact(top_m) / num;
  return detail::exact_report("schur_orthogonal", {{"k", k}, {"c", c}, {"t", detail::rational_list(t)}}, lhs, rhs);
}

/// det(z^m) det(z^{-m}) / det(z^m - z^{-m}) against its product form.
inline IdentityReport quotient_identity_check(const std::vector<Rational>& z) {
  const std::size_t k = z.size();
  if (k == 0) throw DomainError("need at least one coordinate");
  for (const auto& x : z)
    if (x == 0 || x == 1 || x == -1) throw DomainError("pole: z_j in {0, 1, -1}");
  if (detail::has_repeats(z)) throw DomainError("pole: repeated coordinates");
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t m = j + 1; m < k; ++m)
      if (z[j] * z[m] == 1) throw DomainError("pole: z_j z_m = 1");

  ExactMatrix pos(k), neg(k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t m = 0; m < k; ++m) {
      pos.at(j, m) = pow(z[j], static_cast<long>(m + 1));
      neg.at(j, m) = pow(z[j], -static_cast<long>(m + 1));
    }
  const Rational anti = detail::antisym_det(z, [](std::size_t m) { return static_cast<long>(m + 1); });
  const Rational lhs = det_exact(pos) * det_exact(neg) / anti;

  Rational rhs = 1;
  for (const auto& x : z) rhs /= x - 1 / x;
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t m = j + 1; m < k; ++m)
      rhs *= (2 - z[m] / z[j] - z[j] / z[m]) / (z[m] + 1 / z[m] - z[j] - 1 / z[j]);
  return detail::exact_report("quotient", {{"k", k}, {"z", detail::rational_list(z)}}, lhs, rhs);
}

/// Determinant with rows j <= a equal to ((-1)^m u_m^{j-1})_m and rows j > a
/// equal to (u_m^{j-a-1})_m, for 0 < u_1 < ... < u_k.
inline Rational mixed_vandermonde_det(const std::vector<Rational>& u, std::size_t a) {
  const std::size_t k = u.size();
  if (k == 0) throw DomainError("need at least one coordinate");
  if (a > k) throw DomainError("a must not exceed k");
  if (u.front() <= 0) throw DomainError("u must be positive");
  for (std::size_t j = 1; j < k; ++j)
    if (u[j] <= u[j - 1]) throw DomainError("u must be strictly increasing");
  ExactMatrix m(k);
  for (std::size_t j = 1; j <= k; ++j)
    for (std::size_t c = 1; c <= k; ++c) {
      if (j <= a)
        m.at(j - 1, c - 1) = (c % 2 == 0 ? 1 : -1) * pow(u[c - 1], static_cast<long>(j - 1));
      else
        m.at(j - 1, c - 1) = pow(u[c - 1], static_cast<long>(j - a - 1));
    }
  return det_exact(m);
}

inline IdentityReport mixed_vandermonde_check(const std::vector<Rational>& u, std::size_t a) {
  const Rational d = mixed_vandermonde_det(u, a);
  IdentityReport r;
  r.identity = "mixed_vandermonde_nonzero";
  r.params = {{"k", u.size()}, {"a", a}, {"u", detail::rational_list(u)}};
  r.residual = d;
  r.pass = d != 0;
  r.sign = d > 0 ? 1 : (d < 0 ? -1 : 0);
  r.details = {{"det", to_string(d)}};
  return r;
}

namespace detail {

template <typename Real>
Real det_float(std::vector<std::vector<Real>> a) {
  using std::abs;
  const std::size_t n = a.size();
  Real det = 1;
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t best = p;
    for (std::size_t i = p + 1; i < n; ++i)
      if (abs(a[i][p]) > abs(a[best][p])) best = i;
    if (a[best][p] == 0) return Real(0);
    if (best != p) {
      std::swap(a[best], a[p]);
      det = -det;
    }
    det *= a[p][p];
    for (std::size_t i = p + 1; i < n; ++i) {
      const Real f = a[i][p] / a[p][p];
      for (std::size_t j = p; j < n; ++j) a[i][j] -= f * a[p][j];
    }
  }
  return det;
}

/// Exact conversion for multiprecision types, nearest double otherwise.
template <typename Real>
Real from_integer(const Integer& z) {
  if constexpr (std::is_floating_point_v<Real>)
    return static_cast<Real>(z.get_d());
  else
    return Real(z.get_str());
}

inline void require_eps(double eps) {
  if (!(eps > 0.0 && eps <= 0.3)) throw DomainError("eps must lie in (0, 0.3]");
}

template <typename Real>
Real vandermonde_of_squares(const std::vector<Real>& x) {
  Real p = 1;
  for (std::size_t j = 0; j < x.size(); ++j)
    for (std::size_t m = j + 1; m < x.size(); ++m) p *= x[m] * x[m] - x[j] * x[j];
  return p;
}

template <typename Real>
IdentityReport ratio_report(std::string name, nlohmann::json params, const Real& ratio) {
  using std::abs;
  IdentityReport r;
  r.identity = std::move(name);
  r.params = std::move(params);
  const double value = static_cast<double>(ratio);
  const double residual = static_cast<double>(abs(ratio) - 1);
  r.residual = residual;
  r.sign = value > 0 ? 1 : (value < 0 ? -1 : 0);
  r.details = {{"ratio", value}};
  // A single evaluation only shows the leading form has the right size; the
  // O(eps^2) law is checked across eps by halving_factor.
  r.pass = std::isfinite(residual) && std::fabs(residual) < 1.0;
  return r;
}

}  // namespace detail

/// det(sin(u_m phi_j)) over its leading form at phi = eps * direction.
template <typename Real = HighPrecision>
IdentityReport dsin_leading_ratio(const std::vector<long>& u, const std::vector<double>& direction, double eps) {
  using std::sin;
  const std::size_t k = u.size();
  detail::require_eps(eps);
  if (k == 0 || direction.size() != k) throw DomainError("u and direction must have the same positive length");
  for (std::size_t j = 0; j < k; ++j) {
    if (u[j] <= 0) throw DomainError("u must be positive");
    if (direction[j] == 0.0) throw DomainError("degenerate direction: zero coordinate");
    for (std::size_t m = 0; m < j; ++m) {
      if (u[m] == u[j]) throw DomainError("u must be distinct");
      if (std::fabs(direction[m]) == std::fabs(direction[j]))
        throw DomainError("degenerate direction: coordinates must have distinct magnitudes");
    }
  }
  std::vector<Real> phi(k), uu(k);
  for (std::size_t j = 0; j < k; ++j) {
    phi[j] = Real(eps) * Real(direction[j]);
    uu[j] = Real(u[j]);
  }
  std::vector<std::vector<Real>> m(k, std::vector<Real>(k));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t c = 0; c < k; ++c) m[j][c] = sin(uu[c] * phi[j]);

  Real lead = detail::vandermonde_of_squares(phi) * detail::vandermonde_of_squares(uu);
  for (std::size_t j = 0; j < k; ++j) {
    lead *= phi[j] * uu[j];
    lead /= detail::from_integer<Real>(factorial(2 * j + 1));
  }
  if ((k * (k - 1) / 2) % 2 == 1) lead = -lead;

  auto dir = nlohmann::json::array();
  for (double d : direction) dir.push_back(d);
  return detail::ratio_report("dsin_leading_ratio", {{"k", k}, {"u", u}, {"direction", dir}, {"eps", eps}},
                              Real(detail::det_float(std::move(m)) / lead));
}

/// det(e^{-(x_j-y_m)^2} - e^{-(x_j+y_m)^2}) over its leading form at
/// x = y = eps (1, ..., k).
template <typename Real = HighPrecision>
IdentityReport gaussian_kernel_det_ratio(std::size_t k, double eps) {
  using std::exp;
  detail::require_eps(eps);
  if (k == 0) throw DomainError("k must be positive");
  std::vector<Real> x(k);
  for (std::size_t j = 0; j < k; ++j) x[j] = Real(eps) * Real(j + 1);
  const std::vector<Real>& y = x;
  std::vector<std::vector<Real>> m(k, std::vector<Real>(k));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t c = 0; c < k; ++c) {
      const Real d = x[j] - y[c], s = x[j] + y[c];
      m[j][c] = exp(-d * d) - exp(-s * s);
    }
  Real lead = detail::vandermonde_of_squares(x) * detail::vandermonde_of_squares(y);
  for (std::size_t j = 0; j < k; ++j) {
    lead *= x[j] * y[j];
    lead /= detail::from_integer<Real>(factorial(2 * j + 1));
  }
  lead *= detail::from_integer<Real>(pow(Integer(2), k * k + k));
  return detail::ratio_report("gaussian_kernel_det_ratio", {{"k", k}, {"eps", eps}},
                              Real(detail::det_float(std::move(m)) / lead));
}

/// Factor by which |residual| shrinks when eps is halved; 4 for an O(eps^2)
/// residual.
inline double halving_factor(const IdentityReport& at_eps, const IdentityReport& at_half) {
  return std::fabs(std::get<double>(at_eps.residual)) / std::fabs(std::get<double>(at_half.residual));
}

/// Reflection of sine determinants through a maximal point: with phi_hat_j = pi
/// where signs_j = -1, det(sin(u_m (phi_hat_j + phi_j))) equals
/// (-1)^{sum u_j phi_hat_j / pi} det(sin(u_m phi_j)). Relative tolerance
/// against the Hadamard bound of the matrix.
inline IdentityReport sign_identity_check(const std::vector<long>& u, const SignVector& signs,
                                          const std::vector<double>& phi, double tolerance = 1e-9) {
  const std::size_t k = u.size();
  if (signs.size() != k || phi.size() != k) throw DomainError("dimension mismatch");
  std::vector<std::vector<double>> shifted(k, std::vector<double>(k)), plain(k, std::vector<double>(k));
  double hadamard = 1.0;
  long exponent = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const double hat = signs[j] < 0 ? std::numbers::pi : 0.0;
    if (signs[j] < 0) exponent += u[j];
    double norm = 0;
    for (std::size_t m = 0; m < k; ++m) {
      const double ud = static_cast<double>(u[m]);
      shifted[j][m] = std::sin(ud * (hat + phi[j]));
      plain[j][m] = std::sin(ud * phi[j]);
      norm += plain[j][m] * plain[j][m];
    }
    hadamard *= std::sqrt(norm);
  }
  const double lhs = detail::det_float(shifted);
  const double rhs = (exponent % 2 == 0 ? 1.0 : -1.0) * detail::det_float(plain);
  IdentityReport r;
  r.identity = "sine_sign_reflection";
  auto phi_json = nlohmann::json::array();
  for (double p : phi) phi_json.push_back(p);
  r.params = {{"k", k}, {"u", u}, {"signs", signs}, {"phi", phi_json}};
  const double residual = std::fabs(lhs - rhs);
  r.residual = residual;
  r.sign = exponent % 2 == 0 ? 1 : -1;
  r.details = {{"lhs", lhs}, {"rhs", rhs}, {"scale", hadamard}};
  r.pass = residual <= tolerance * std::max(hadamard, 1e-300);
  return r;
}

enum class SelbergWeight { Laguerre, Hermite };
enum class SelbergQuantity { One, Aomoto };

inline std::string to_string(SelbergWeight w) { return w == SelbergWeight::Laguerre ? "laguerre" : "hermite"; }
inline std::string to_string(SelbergQuantity q) { return q == SelbergQuantity::One ? "one" : "aomoto"; }

/// <1>_L = pi^{k/2} 2^{-k^2} prod (2j-1)!,  <1>_H = (2 pi)^{k/2} prod j!.
inline double selberg_closed_form(std::size_t k, SelbergWeight weight) {
  if (k == 0) throw DomainError("k must be positive");
  const double kd = static_cast<double>(k);
  double lg = 0;
  if (weight == SelbergWeight::Laguerre) {
    lg = 0.5 * kd * std::log(std::numbers::pi) - kd * kd * std::numbers::ln2;
    for (std::size_t j = 1; j <= k; ++j) lg += log_factorial(2 * j - 1);
  } else {
    lg = 0.5 * kd * std::log(2.0 * std::numbers::pi);
    for (std::size_t j = 1; j <= k; ++j) lg += log_factorial(j);
  }
  return std::exp(lg);
}

/// Aomoto ratio <sum x>_L / <1>_L = k^2 + k/2, <sum x^2>_H / <1>_H = k^2.
inline double selberg_aomoto_ratio(std::size_t k, SelbergWeight weight) {
  const double kd = static_cast<double>(k);
  return weight == SelbergWeight::Laguerre ? kd * kd + 0.5 * kd : kd * kd;
}

/// Monte Carlo check of the Selberg evaluations.
///
/// Laguerre: x_j iid Exp(1), f = sqrt(prod x_j) prod_{j<m} (x_m - x_j)^2, so
/// <1>_L = E f over [0, inf)^k. Hermite: x_j iid N(0, 1),
/// f = prod_{j<m} (x_m - x_j)^2 and <1>_H = (2 pi)^{k/2} E f.
/// For `Aomoto` the estimate is E[f g] / E[f] with g = sum x_j (Laguerre) or
/// sum x_j^2 (Hermite), standard error by the delta method. Pass iff the
/// estimate is within 3 standard errors of the closed-form target.
inline IdentityReport selberg_mc_check(std::size_t k, SelbergWeight weight, SelbergQuantity which,
                                       std::size_t samples, std::uint64_t seed) {
  if (k == 0 || k > 3) throw DomainError("Monte Carlo Selberg check supports 1 <= k <= 3");
  if (samples < 100000) throw DomainError("Monte Carlo Selberg check needs at least 1e5 samples");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(k);

  // Running sums for f, g f, f^2, (g f)^2, f * g f.
  double sf = 0, sh = 0, sff = 0, shh = 0, sfh = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (auto& xi : x) xi = weight == SelbergWeight::Laguerre ? expo(rng) : normal(rng);
    double f = 1, g = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (weight == SelbergWeight::Laguerre) {
        f *= std::sqrt(x[j]);
        g += x[j];
      } else {
        g += x[j] * x[j];
      }
      for (std::size_t m = j + 1; m < k; ++m) f *= (x[m] - x[j]) * (x[m] - x[j]);
    }
    const double h = f * g;
    sf += f;
    sh += h;
    sff += f * f;
    shh += h * h;
    sfh += f * h;
  }
  const double n = static_cast<double>(samples);
  const double mf = sf / n, mh = sh / n;
  const double vf = (sff / n - mf * mf) * n / (n - 1);
  const double vh = (shh / n - mh * mh) * n / (n - 1);
  const double cfh = (sfh / n - mf * mh) * n / (n - 1);
  const double norm = weight == SelbergWeight::Hermite ? std::pow(2.0 * std::numbers::pi, 0.5 * k) : 1.0;

  double estimate = 0, se = 0, target = 0;
  if (which == SelbergQuantity::One) {
    estimate = norm * mf;
    se = norm * std::sqrt(vf / n);
    target = selberg_closed_form(k, weight);
  } else {
    const double r = mh / mf;
    estimate = r;
    se = std::sqrt(std::max(0.0, vh - 2 * r * cfh + r * r * vf) / n) / mf;
    target = selberg_aomoto_ratio(k, weight);
  }

  IdentityReport rep;
  rep.identity = "selberg_" + to_string(weight) + "_" + to_string(which);
  rep.params = {{"k", k}, {"samples", samples}, {"seed", seed}};
  rep.residual = estimate - target;
  rep.details = {{"estimate", estimate},
                 {"target", target},
                 {"standard_error", se},
                 {"z", se > 0 ? (estimate - target) / se : 0.0}};
  rep.pass = std::fabs(estimate - target) <= 3.0 * se;
  return rep;
}

}  // namespace chamberwalk
