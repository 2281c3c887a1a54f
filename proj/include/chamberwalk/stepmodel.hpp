#pragma once

// Walk model for reflectable walks in the type-B chamber 0 < x_1 < ... < x_k.
//
// Atomic steps are either the axis steps {±e_j} or the diagonal steps
// {(±1,...,±1)}. A composite step is a run of m atomic steps, and every run of
// length m carries the same weight w_m, so the composite step generating
// function is S(z) = P(A(z)) with P(x) = sum_m w_m x^m and
//
//   A(z) = sum_j (z_j + 1/z_j)     (axis)
//   A(z) = prod_j (z_j + 1/z_j)    (diagonal).
//
// Maximal points of |S| on the torus lie in {0, pi}^k; they are represented
// here by sign vectors (+1 for angle 0, -1 for angle pi) so that all of the
// maximal-point logic stays in exact rational arithmetic.

#include "chamberwalk/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chamberwalk {

using Coord = std::int64_t;
using Coords = std::vector<Coord>;
using SignVector = std::vector<int>;

enum class AtomicKind { Axis, Diagonal };

inline std::string to_string(AtomicKind kind) {
  return kind == AtomicKind::Axis ? "axis" : "diagonal";
}

inline AtomicKind parse_atomic_kind(std::string_view text) {
  if (text == "axis") return AtomicKind::Axis;
  if (text == "diagonal") return AtomicKind::Diagonal;
  throw DomainError("unknown atomic kind '" + std::string(text) + "' (expected axis|diagonal)");
}

/// A point (or displacement) of Z^k; lattice membership is checked against a spec.
struct LatticePoint {
  Coords coords;
};

inline bool in_chamber(std::span<const Coord> p) {
  Coord prev = 0;
  for (Coord x : p) {
    if (x <= prev) return false;
    prev = x;
  }
  return true;
}

/// A point strictly inside the chamber 0 < x_1 < ... < x_k.
class ChamberPoint {
 public:
  explicit ChamberPoint(Coords coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw DomainError("chamber point needs at least one coordinate");
    if (!in_chamber(coords_)) throw DomainError("point is not strictly inside the chamber");
  }

  const Coords& coords() const { return coords_; }
  std::size_t dim() const { return coords_.size(); }
  Coord operator[](std::size_t i) const { return coords_[i]; }
  Coord top() const { return coords_.back(); }

  friend bool operator==(const ChamberPoint&, const ChamberPoint&) = default;
  friend auto operator<=>(const ChamberPoint& a, const ChamberPoint& b) {
    return a.coords_ <=> b.coords_;
  }

 private:
  Coords coords_;
};

/// The composite step model: atomic kind, dimension, and the weight
/// polynomial P(x) = sum_m w_m x^m.
class CompositeSpec {
 public:
  CompositeSpec(AtomicKind kind, std::size_t k, std::vector<Rational> weights)
      : kind_(kind), k_(k), weights_(std::move(weights)) {
    if (k_ == 0) throw DomainError("dimension k must be positive");
    for (auto& w : weights_) {
      w.canonicalize();
      if (w < 0) throw DomainError("weights must be nonnegative");
    }
    while (!weights_.empty() && weights_.back() == 0) weights_.pop_back();
    if (weights_.size() < 2)
      throw DomainError("spec has no moving composite step (need some w_m > 0 with m >= 1)");
    denominator_ = 1;
    for (const auto& w : weights_) mpz_lcm(denominator_.get_mpz_t(), denominator_.get_mpz_t(),
                                          w.get_den_mpz_t());
    for (const auto& w : weights_) int_weights_.push_back(Integer(w * denominator_));
  }

  AtomicKind kind() const { return kind_; }
  std::size_t dim() const { return k_; }
  const std::vector<Rational>& weights() const { return weights_; }
  /// Highest m with w_m > 0.
  std::size_t degree() const { return weights_.size() - 1; }

  /// Weights scaled by the common denominator; counts computed with these
  /// are divided by denominator()^n.
  const std::vector<Integer>& integer_weights() const { return int_weights_; }
  const Integer& denominator() const { return denominator_; }
  bool integral() const { return denominator_ == 1; }

  Rational poly(const Rational& x) const { return horner(weights_, x); }
  Rational poly_d1(const Rational& x) const {
    std::vector<Rational> d;
    for (std::size_t m = 1; m < weights_.size(); ++m) d.push_back(weights_[m] * static_cast<long>(m));
    return horner(d, x);
  }
  Rational poly_d2(const Rational& x) const {
    std::vector<Rational> d;
    for (std::size_t m = 2; m < weights_.size(); ++m)
      d.push_back(weights_[m] * static_cast<long>(m * (m - 1)));
    return horner(d, x);
  }

  /// +1 if P is even, -1 if odd, 0 if neither.
  int polynomial_parity() const {
    bool has_even = false, has_odd = false;
    for (std::size_t m = 0; m < weights_.size(); ++m) {
      if (weights_[m] == 0) continue;
      (m % 2 == 0 ? has_even : has_odd) = true;
    }
    if (has_even && has_odd) return 0;
    return has_odd ? -1 : 1;
  }

  /// The atomic step set as displacement vectors.
  std::vector<Coords> atomic_steps() const {
    std::vector<Coords> steps;
    if (kind_ == AtomicKind::Axis) {
      for (std::size_t j = 0; j < k_; ++j) {
        for (Coord s : {Coord{1}, Coord{-1}}) {
          Coords a(k_, 0);
          a[j] = s;
          steps.push_back(std::move(a));
        }
      }
    } else {
      for (std::size_t mask = 0; mask < (std::size_t{1} << k_); ++mask) {
        Coords a(k_);
        for (std::size_t j = 0; j < k_; ++j) a[j] = (mask >> j) & 1 ? -1 : 1;
        steps.push_back(std::move(a));
      }
    }
    return steps;
  }

  friend bool operator==(const CompositeSpec& a, const CompositeSpec& b) {
    return a.kind_ == b.kind_ && a.k_ == b.k_ && a.weights_ == b.weights_;
  }

 private:
  static Rational horner(const std::vector<Rational>& c, const Rational& x) {
    Rational acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  AtomicKind kind_;
  std::size_t k_;
  std::vector<Rational> weights_;
  std::vector<Integer> int_weights_;
  Integer denominator_;
};

/// A(z) for the spec's atomic kind.
inline Rational atomic_gf_value(const CompositeSpec& spec, std::span<const Rational> z) {
  if (z.size() != spec.dim()) throw DomainError("dimension mismatch in generating function argument");
  Rational acc = spec.kind() == AtomicKind::Axis ? Rational(0) : Rational(1);
  for (const auto& zj : z) {
    if (zj == 0) throw DomainError("generating function evaluated at a zero coordinate");
    Rational term = zj + 1 / zj;
    if (spec.kind() == AtomicKind::Axis)
      acc += term;
    else
      acc *= term;
  }
  return acc;
}

/// S(z) = P(A(z)), exact.
inline Rational composite_gf_value(const CompositeSpec& spec, std::span<const Rational> z) {
  return spec.poly(atomic_gf_value(spec, z));
}

/// A(1,...,1): 2k for axis steps, 2^k for diagonal steps.
inline Rational atomic_at_one(const CompositeSpec& spec) {
  if (spec.kind() == AtomicKind::Axis) return Rational(2 * static_cast<long>(spec.dim()));
  Integer two_k;
  mpz_ui_pow_ui(two_k.get_mpz_t(), 2, spec.dim());
  return Rational(two_k);
}

inline Rational s_one(const CompositeSpec& spec) { return spec.poly(atomic_at_one(spec)); }

/// S evaluated at the sign vector eps, i.e. at angles {0, pi}^k.
inline Rational gf_at_signs(const CompositeSpec& spec, const SignVector& eps) {
  std::vector<Rational> z;
  for (int e : eps) z.emplace_back(e);
  return composite_gf_value(spec, z);
}

/// Distribution of the displacement of one composite step:
/// D = sum_m w_m A^{*m}, as exact weights keyed by displacement.
inline std::map<Coords, Rational> displacement_distribution(const CompositeSpec& spec) {
  const auto steps = spec.atomic_steps();
  std::map<Coords, Rational> power{{Coords(spec.dim(), 0), Rational(1)}};
  std::map<Coords, Rational> out;
  for (std::size_t m = 0; m <= spec.degree(); ++m) {
    if (spec.weights()[m] != 0)
      for (const auto& [d, c] : power) out[d] += spec.weights()[m] * c;
    if (m == spec.degree()) break;
    std::map<Coords, Rational> next;
    for (const auto& [d, c] : power) {
      for (const auto& a : steps) {
        Coords e = d;
        for (std::size_t j = 0; j < e.size(); ++j) e[j] += a[j];
        next[e] += c;
      }
    }
    power = std::move(next);
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

/// d^2/dz_1^2 S at (1,...,1), read off the displacement distribution:
/// sum_a c_a * a_1 (a_1 - 1).
inline Rational s_second_derivative_at_one(const CompositeSpec& spec) {
  Rational acc = 0;
  for (const auto& [d, c] : displacement_distribution(spec)) acc += c * (d[0] * (d[0] - 1));
  return acc;
}

struct GaussianExpansion {
  Rational lambda;
  Rational omega;
  Rational psi;
  bool omega_psi_validated = false;
};

/// Quadratic/quartic constants of log|S(e^{i phi})| at phi = 0.
///
/// The diagonal-case omega is returned exactly as the closed form is usually
/// printed (with argument 2k, not 2^k) and flagged unvalidated.
inline GaussianExpansion gaussian_expansion(const CompositeSpec& spec) {
  GaussianExpansion g;
  const Rational two_k(2 * static_cast<long>(spec.dim()));
  if (spec.kind() == AtomicKind::Axis) {
    const Rational p = spec.poly(two_k);
    g.lambda = 2 * spec.poly_d1(two_k) / p;
    g.omega = 4 * spec.poly_d2(two_k) / (p * p) - g.lambda * g.lambda;
    g.psi = g.lambda;
    g.omega_psi_validated = true;
    const Rational via_distribution = s_second_derivative_at_one(spec) / s_one(spec);
    if (via_distribution != g.lambda)
      throw std::logic_error("lambda disagrees with S''(1)/S(1) from the step distribution");
  } else {
    const Rational at = atomic_at_one(spec);
    g.lambda = at * spec.poly_d1(at) / spec.poly(at);
    const Rational p2k = spec.poly(two_k);
    g.omega = pow(Rational(4), static_cast<long>(spec.dim())) * spec.poly_d2(two_k) / (p2k * p2k) -
              g.lambda * g.lambda + g.lambda;
    g.psi = -2 * g.lambda;
    g.omega_psi_validated = false;
  }
  if (g.lambda <= 0) throw DomainError("lambda must be positive");
  return g;
}

/// log|S(e^{i phi}, 1, ..., 1)| in the real cosine form, for numeric checks.
template <typename Real>
Real log_abs_gf_first_angle(const CompositeSpec& spec, const Real& phi) {
  using std::cos;
  using std::fabs;
  using std::log;
  Real a;
  if (spec.kind() == AtomicKind::Axis)
    a = 2 * cos(phi) + Real(2 * (static_cast<long>(spec.dim()) - 1));
  else
    a = Real(std::pow(2.0, static_cast<double>(spec.dim()))) * cos(phi);
  Real acc = 0;
  for (auto it = spec.weights().rbegin(); it != spec.weights().rend(); ++it)
    acc = acc * a + Real(it->get_d());
  return log(fabs(acc));
}

/// Finite-difference estimate of -d^2/dphi_1^2 log|S(e^{i phi})| at 0
/// (five-point central stencil).
template <typename Real>
Real lambda_numeric(const CompositeSpec& spec, const Real& h) {
  auto f = [&](const Real& x) { return log_abs_gf_first_angle<Real>(spec, x); };
  Real d2 = (-f(2 * h) + 16 * f(h) - 30 * f(Real(0)) + 16 * f(-h) - f(-2 * h)) / (12 * h * h);
  return -d2;
}

struct MaximalPointSet {
  std::vector<SignVector> points;
  std::size_t size() const { return points.size(); }
};

/// Sign vectors eps with |S(eps)| = S(1,...,1), in lexicographic order
/// (all-plus first).
inline MaximalPointSet maximal_points(const CompositeSpec& spec) {
  const Rational top = s_one(spec);
  const std::size_t k = spec.dim();
  MaximalPointSet out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    SignVector eps(k);
    for (std::size_t j = 0; j < k; ++j) eps[j] = (mask >> (k - 1 - j)) & 1 ? -1 : 1;
    if (abs(gf_at_signs(spec, eps)) == top) out.points.push_back(std::move(eps));
  }
  return out;
}

/// Membership in the lattice spanned by the atomic steps.
inline bool lattice_contains(const CompositeSpec& spec, const LatticePoint& p) {
  if (p.coords.size() != spec.dim()) throw DomainError("dimension mismatch");
  if (spec.kind() == AtomicKind::Axis) return true;
  const auto parity = [](Coord x) { return ((x % 2) + 2) % 2; };
  return std::all_of(p.coords.begin(), p.coords.end(),
                     [&](Coord x) { return parity(x) == parity(p.coords.front()); });
}

inline bool lattice_contains(const CompositeSpec& spec, const ChamberPoint& p) {
  return lattice_contains(spec, LatticePoint{p.coords()});
}

/// Throws unless p is a lattice point of the spec's dimension.
inline void require_admissible(const CompositeSpec& spec, const ChamberPoint& p) {
  if (p.dim() != spec.dim()) throw DomainError("dimension mismatch between point and spec");
  if (!lattice_contains(spec, p)) throw DomainError("point is not in the lattice of the step set");
}

}  // namespace chamberwalk
