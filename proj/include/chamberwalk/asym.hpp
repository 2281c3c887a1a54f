#pragma once

// Closed-form asymptotics for confined walk counts and convergence
// diagnostics against the exact counts.
//
// Fixed end point, along lengths n with a positive count:
//
//   P_n^+(u->v) ~ |M| S(1)^n (2/pi)^{k/2} (n Lambda)^{-(k^2+k/2)}
//                 * prod_{j<m} (u_m^2-u_j^2)(v_m^2-v_j^2) * prod_j u_j v_j
//                 / prod_j (2j-1)!
//
// Free end point:
//
//   P_n^+(u) ~ S(1)^n (2/pi)^{k/2} (n Lambda)^{-k^2/2}
//              * prod_j u_j (j-1)!/(2j-1)! * prod_{j<m} (u_m^2-u_j^2)
//
// Everything is evaluated in log space. The second-order factor
// (1 + 1/(n Lambda)) is available behind a flag and is off by default: the
// lock-step k=1 expansion has second-order coefficient -9/4 in 1/n, not +1.

#include "chamberwalk/exact.hpp"
#include "chamberwalk/numeric.hpp"
#include "chamberwalk/stepmodel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace chamberwalk {

struct AsymptoticEstimate {
  /// Natural log of the estimate; NaN when the length is unsupported.
  double log_value = std::numeric_limits<double>::quiet_NaN();
  /// n log S(1).
  double base_log = 0.0;
  /// Exponent of n.
  Rational n_power;
  /// Everything except the base and the power of n (includes Lambda^{n_power}).
  double constant_log = 0.0;
  /// log_value - base_log, computed directly so it keeps full precision when
  /// compared against exact counts scaled by S(1)^n.
  double reduced_log = std::numeric_limits<double>::quiet_NaN();
  bool correction_applied = false;
  bool supported = false;
};

/// Necessary parity condition for P_n^+(u->v) > 0.
inline bool support_positive(const CompositeSpec& spec, const ChamberPoint& u, const ChamberPoint& v,
                             std::size_t n) {
  const int parity = spec.polynomial_parity();
  if (parity == 0) return true;
  const Coord length_parity = parity < 0 ? static_cast<Coord>(n % 2) : 0;
  const auto mod2 = [](Coord x) { return ((x % 2) + 2) % 2; };
  if (spec.kind() == AtomicKind::Axis) {
    Coord sum = 0;
    for (std::size_t j = 0; j < u.dim(); ++j) sum += u[j] + v[j];
    return mod2(sum) == length_parity;
  }
  for (std::size_t j = 0; j < u.dim(); ++j)
    if (mod2(v[j] - u[j]) != length_parity) return false;
  return true;
}

namespace detail {

inline double log_double_factorial_product(std::size_t k) {
  double acc = 0;
  for (std::size_t j = 1; j <= k; ++j) acc += log_factorial(2 * j - 1);
  return acc;
}

inline double log_vandermonde_squares(const ChamberPoint& p) {
  double acc = 0;
  for (std::size_t j = 0; j < p.dim(); ++j)
    for (std::size_t m = j + 1; m < p.dim(); ++m)
      acc += std::log(static_cast<double>(p[m] * p[m] - p[j] * p[j]));
  return acc;
}

inline double log_product(const ChamberPoint& p) {
  double acc = 0;
  for (std::size_t j = 0; j < p.dim(); ++j) acc += std::log(static_cast<double>(p[j]));
  return acc;
}

}  // namespace detail

inline AsymptoticEstimate asym_fixed(const CompositeSpec& spec, const ChamberPoint& u, const ChamberPoint& v,
                                     std::size_t n, bool correction = false) {
  if (n == 0) throw DomainError("asymptotic estimate needs n >= 1");
  require_admissible(spec, u);
  require_admissible(spec, v);
  const double k = static_cast<double>(spec.dim());
  const double lambda = gaussian_expansion(spec).lambda.get_d();
  const double nd = static_cast<double>(n);

  AsymptoticEstimate est;
  est.supported = support_positive(spec, u, v, n);
  est.n_power = ratio(-(2 * static_cast<long>(spec.dim() * spec.dim()) + static_cast<long>(spec.dim())), 2);
  est.base_log = nd * log_abs(s_one(spec));
  const double power = est.n_power.get_d();
  est.constant_log = std::log(static_cast<double>(maximal_points(spec).size())) +
                     0.5 * k * std::log(2.0 / std::numbers::pi) + power * std::log(lambda) +
                     detail::log_vandermonde_squares(u) + detail::log_vandermonde_squares(v) +
                     detail::log_product(u) + detail::log_product(v) -
                     detail::log_double_factorial_product(spec.dim());
  if (correction) {
    est.constant_log += std::log1p(1.0 / (nd * lambda));
    est.correction_applied = true;
  }
  if (est.supported) {
    est.reduced_log = power * std::log(nd) + est.constant_log;
    est.log_value = est.base_log + est.reduced_log;
  }
  return est;
}

inline AsymptoticEstimate asym_free(const CompositeSpec& spec, const ChamberPoint& u, std::size_t n) {
  if (n == 0) throw DomainError("asymptotic estimate needs n >= 1");
  require_admissible(spec, u);
  const double k = static_cast<double>(spec.dim());
  const double lambda = gaussian_expansion(spec).lambda.get_d();
  const double nd = static_cast<double>(n);

  AsymptoticEstimate est;
  est.supported = true;
  est.n_power = ratio(-static_cast<long>(spec.dim() * spec.dim()), 2);
  est.base_log = nd * log_abs(s_one(spec));
  const double power = est.n_power.get_d();
  double c = 0.5 * k * std::log(2.0 / std::numbers::pi) + power * std::log(lambda) +
             detail::log_vandermonde_squares(u);
  for (std::size_t j = 1; j <= spec.dim(); ++j)
    c += std::log(static_cast<double>(u[j - 1])) + log_factorial(j - 1) - log_factorial(2 * j - 1);
  est.constant_log = c;
  est.reduced_log = power * std::log(nd) + est.constant_log;
  est.log_value = est.base_log + est.reduced_log;
  return est;
}

struct ConvergenceRow {
  std::size_t n = 0;
  CountValue exact;
  double exact_log = 0.0;
  double asym_log = 0.0;
  double ratio = 0.0;
  /// exact/asym - 1 (signed).
  double residual = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();
  double fitted_intercept = std::numeric_limits<double>::quiet_NaN();
};

struct LineFit {
  double slope;
  double intercept;
};

/// Ordinary least squares y = slope*x + intercept.
inline LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DiagnosticError("line fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw DiagnosticError("degenerate grid: all abscissae coincide");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

namespace detail {

inline LineFit fit_log_residuals(const ConvergenceReport& report) {
  std::vector<double> x, y;
  for (const auto& row : report.rows) {
    if (row.residual == 0.0) continue;
    x.push_back(std::log(static_cast<double>(row.n)));
    y.push_back(std::log(std::fabs(row.residual)));
  }
  if (x.size() < 3) throw DiagnosticError("decay fit needs at least three rows with nonzero residual");
  return least_squares_line(x, y);
}

}  // namespace detail

/// Least-squares slope of log|delta_n| against log n.
inline double fit_decay(const ConvergenceReport& report) { return detail::fit_log_residuals(report).slope; }

/// Coefficient a of the fit delta_n = a/n + b/n^2 over rows with n >= n_min.
inline double second_order_coefficient(const ConvergenceReport& report, std::size_t n_min) {
  // n*delta_n = a + b/n is linear in 1/n.
  std::vector<double> x, y;
  for (const auto& row : report.rows) {
    if (row.n < n_min) continue;
    x.push_back(1.0 / static_cast<double>(row.n));
    y.push_back(static_cast<double>(row.n) * row.residual);
  }
  if (x.size() < 3) throw DiagnosticError("second-order fit needs at least three rows");
  return least_squares_line(x, y).intercept;
}

/// Exact counts against the leading asymptotic term over a grid of lengths.
/// `v` empty means free end point. Unsupported lengths and zero counts are
/// skipped.
inline ConvergenceReport compare_series(const CompositeSpec& spec, const ChamberPoint& u,
                                        const std::optional<ChamberPoint>& v, const std::vector<std::size_t>& grid,
                                        const CountOptions& opts = {}) {
  std::vector<std::size_t> kept;
  for (std::size_t n : grid) {
    if (n == 0) continue;
    if (v && !support_positive(spec, u, *v, n)) continue;
    kept.push_back(n);
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  if (kept.size() < 3) throw DiagnosticError("fewer than three supported grid points");

  const auto counts = confined_series(spec, u, v, kept.back(), opts);
  const Rational base = s_one(spec);
  ConvergenceReport report;
  for (std::size_t n : kept) {
    const CountValue& exact = counts[n];
    if (exact <= 0) continue;
    const AsymptoticEstimate est = v ? asym_fixed(spec, u, *v, n) : asym_free(spec, u, n);
    const double reduced_exact = log_abs(CountValue(exact / pow(base, static_cast<long>(n))));
    ConvergenceRow row;
    row.n = n;
    row.exact = exact;
    row.exact_log = reduced_exact + est.base_log;
    row.asym_log = est.log_value;
    const double diff = reduced_exact - est.reduced_log;
    row.ratio = std::exp(diff);
    row.residual = std::expm1(diff);
    report.rows.push_back(std::move(row));
  }
  if (report.rows.size() >= 3) {
    const LineFit fit = detail::fit_log_residuals(report);
    report.fitted_slope = fit.slope;
    report.fitted_intercept = fit.intercept;
  } else {
    throw DiagnosticError("fewer than three grid points with a positive exact count");
  }
  return report;
}

}  // namespace chamberwalk
