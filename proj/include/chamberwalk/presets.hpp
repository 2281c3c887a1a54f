#pragma once

// Named walk models for vicious walkers with a wall and for k-non-crossing
// tangled diagrams, plus independent closed-form leading terms for each of
// them. The closed forms here are written out per model (no call into
// asym.hpp) so that they can be cross-checked against the general
// fixed/free end point formulas.
//
// Walker heights h_j = 0, 2, 4, ... are stored shifted by +1 as chamber
// coordinates 1, 3, 5, ...

#include "chamberwalk/asym.hpp"
#include "chamberwalk/numeric.hpp"
#include "chamberwalk/stepmodel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace chamberwalk {

enum class PresetId {
  LockStepFixed,
  Watermelon,
  LockStepFree,
  Star,
  RandomTurnsFixed,
  RandomTurnsFree,
  TangledIsolated,
  TangledNoIsolated,
};

inline constexpr std::array<PresetId, 8> kAllPresets = {
    PresetId::LockStepFixed,    PresetId::Watermelon,      PresetId::LockStepFree,
    PresetId::Star,             PresetId::RandomTurnsFixed, PresetId::RandomTurnsFree,
    PresetId::TangledIsolated,  PresetId::TangledNoIsolated,
};

inline std::string_view preset_name(PresetId id) {
  switch (id) {
    case PresetId::LockStepFixed: return "lock-step-fixed";
    case PresetId::Watermelon: return "watermelon";
    case PresetId::LockStepFree: return "lock-step-free";
    case PresetId::Star: return "star";
    case PresetId::RandomTurnsFixed: return "random-turns-fixed";
    case PresetId::RandomTurnsFree: return "random-turns-free";
    case PresetId::TangledIsolated: return "tangled-isolated";
    case PresetId::TangledNoIsolated: return "tangled-no-isolated";
  }
  return "";
}

inline PresetId parse_preset(std::string_view name) {
  for (PresetId id : kAllPresets)
    if (preset_name(id) == name) return id;
  throw DomainError("unknown preset '" + std::string(name) + "'");
}

inline bool preset_has_free_end(PresetId id) {
  return id == PresetId::LockStepFree || id == PresetId::Star || id == PresetId::RandomTurnsFree;
}

/// True for presets whose end points are part of the model definition.
inline bool preset_fixes_endpoints(PresetId id) {
  return id == PresetId::Watermelon || id == PresetId::Star || id == PresetId::TangledIsolated ||
         id == PresetId::TangledNoIsolated;
}

inline CompositeSpec preset_model(PresetId id, std::size_t k) {
  switch (id) {
    case PresetId::LockStepFixed:
    case PresetId::Watermelon:
    case PresetId::LockStepFree:
    case PresetId::Star:
      return CompositeSpec(AtomicKind::Diagonal, k, {0, 1});
    case PresetId::RandomTurnsFixed:
    case PresetId::RandomTurnsFree:
      return CompositeSpec(AtomicKind::Axis, k, {0, 1});
    case PresetId::TangledIsolated:
      return CompositeSpec(AtomicKind::Axis, k, {1, 1, 1});
    case PresetId::TangledNoIsolated:
      return CompositeSpec(AtomicKind::Axis, k, {0, 1, 1});
  }
  throw DomainError("unknown preset");
}

struct Endpoints {
  std::optional<ChamberPoint> u;
  std::optional<ChamberPoint> v;
};

struct PresetInstance {
  PresetId id;
  CompositeSpec spec;
  ChamberPoint u;
  std::optional<ChamberPoint> v;
  /// Composite steps per unit of the preset's n (2 for watermelon, whose n
  /// counts half the length).
  std::size_t length_scale = 1;

  std::size_t walk_length(std::size_t n) const { return length_scale * n; }
};

inline ChamberPoint odd_heights(std::size_t k) {
  Coords c(k);
  for (std::size_t j = 0; j < k; ++j) c[j] = static_cast<Coord>(2 * j + 1);
  return ChamberPoint(std::move(c));
}

inline ChamberPoint consecutive(std::size_t k) {
  Coords c(k);
  for (std::size_t j = 0; j < k; ++j) c[j] = static_cast<Coord>(j + 1);
  return ChamberPoint(std::move(c));
}

inline PresetInstance preset_spec(PresetId id, std::size_t k, const Endpoints& endpoints = {}) {
  if (k == 0) throw DomainError("k must be positive");
  PresetInstance inst{id, preset_model(id, k), ChamberPoint(consecutive(k)), std::nullopt, 1};
  const std::string name(preset_name(id));

  if (preset_fixes_endpoints(id)) {
    const ChamberPoint fixed =
        id == PresetId::Watermelon || id == PresetId::Star ? odd_heights(k) : consecutive(k);
    if ((endpoints.u && *endpoints.u != fixed) || (endpoints.v && *endpoints.v != fixed))
      throw DomainError(name + " end points are fixed by the model");
    if (id == PresetId::Star && endpoints.v) throw DomainError("star has a free end point");
    inst.u = fixed;
    if (id != PresetId::Star) inst.v = fixed;
    if (id == PresetId::Watermelon) inst.length_scale = 2;
  } else {
    if (!endpoints.u) throw DomainError(name + " requires a start point");
    inst.u = *endpoints.u;
    if (preset_has_free_end(id)) {
      if (endpoints.v) throw DomainError(name + " has a free end point");
    } else {
      if (!endpoints.v) throw DomainError(name + " requires an end point");
      inst.v = *endpoints.v;
    }
  }
  require_admissible(inst.spec, inst.u);
  if (inst.v) require_admissible(inst.spec, *inst.v);
  return inst;
}

namespace detail {

inline double log_sum_sq_gaps(const ChamberPoint& p) {
  double acc = 0;
  for (std::size_t j = 0; j < p.dim(); ++j)
    for (std::size_t m = j + 1; m < p.dim(); ++m)
      acc += std::log(static_cast<double>(p[m] * p[m] - p[j] * p[j]));
  return acc;
}

inline double log_coords(const ChamberPoint& p) {
  double acc = 0;
  for (std::size_t j = 0; j < p.dim(); ++j) acc += std::log(static_cast<double>(p[j]));
  return acc;
}

inline double log_odd_factorials(std::size_t k) {
  double acc = 0;
  for (std::size_t j = 1; j <= k; ++j) acc += std::lgamma(2.0 * static_cast<double>(j));
  return acc;
}

/// log prod_j u_j (j-1)!/(2j-1)! + log prod_{j<m}(u_m^2-u_j^2)
inline double log_free_endpoint_factor(const ChamberPoint& u) {
  double acc = log_sum_sq_gaps(u) + log_coords(u) - log_odd_factorials(u.dim());
  for (std::size_t j = 1; j <= u.dim(); ++j) acc += std::lgamma(static_cast<double>(j));
  return acc;
}

inline double log_fixed_endpoint_factor(const ChamberPoint& u, const ChamberPoint& v) {
  return log_sum_sq_gaps(u) + log_sum_sq_gaps(v) + log_coords(u) + log_coords(v) -
         log_odd_factorials(u.dim());
}

inline void finish(AsymptoticEstimate& est, double n, bool supported) {
  est.supported = supported;
  if (!supported) return;
  est.reduced_log = est.n_power.get_d() * std::log(n) + est.constant_log;
  est.log_value = est.base_log + est.reduced_log;
}

}  // namespace detail

/// Leading term of the preset's closed-form asymptotics at the preset's own
/// n (half-length for watermelon). With `correction`, the printed
/// second-order factor of the preset is applied; it is a diagnostic only.
inline AsymptoticEstimate preset_asym(PresetId id, std::size_t k, std::size_t n,
                                      const Endpoints& endpoints = {}, bool correction = false) {
  if (n == 0) throw DomainError("asymptotic estimate needs n >= 1");
  const PresetInstance inst = preset_spec(id, k, endpoints);
  const double kd = static_cast<double>(k), nd = static_cast<double>(n);
  const double ln2 = std::numbers::ln2, lnpi = std::log(std::numbers::pi);
  const long k2 = static_cast<long>(k * k), kl = static_cast<long>(k);
  const Rational fixed_power = ratio(-(2 * k2 + kl), 2), free_power = ratio(-k2, 2);

  AsymptoticEstimate est;
  double correction_term = 0.0;
  bool supported = true;
  switch (id) {
    case PresetId::LockStepFixed: {
      // 2^{nk+3k/2} pi^{-k/2} n^{-k^2-k/2} * endpoint factor, (1 + 1/n)
      est.base_log = nd * kd * ln2;
      est.n_power = fixed_power;
      est.constant_log = 1.5 * kd * ln2 - 0.5 * kd * lnpi + detail::log_fixed_endpoint_factor(inst.u, *inst.v);
      correction_term = 1.0 / nd;
      supported = ((inst.u[0] + (*inst.v)[0] + static_cast<Coord>(n)) % 2) == 0;
      break;
    }
    case PresetId::Watermelon: {
      // 4^{kn} 2^{k^2-k} pi^{-k/2} n^{-k^2-k/2} prod (2j-1)!, (1 + 1/n)
      est.base_log = nd * kd * std::log(4.0);
      est.n_power = fixed_power;
      est.constant_log = (kd * kd - kd) * ln2 - 0.5 * kd * lnpi + detail::log_odd_factorials(k);
      correction_term = 1.0 / nd;
      break;
    }
    case PresetId::LockStepFree: {
      // 2^{nk+k/2} pi^{-k/2} n^{-k^2/2} * free factor
      est.base_log = nd * kd * ln2;
      est.n_power = free_power;
      est.constant_log = 0.5 * kd * ln2 - 0.5 * kd * lnpi + detail::log_free_endpoint_factor(inst.u);
      break;
    }
    case PresetId::Star: {
      // 2^{nk+k^2-k/2} pi^{-k/2} n^{-k^2/2} prod (j-1)!
      est.base_log = nd * kd * ln2;
      est.n_power = free_power;
      double c = (kd * kd - 0.5 * kd) * ln2 - 0.5 * kd * lnpi;
      for (std::size_t j = 1; j <= k; ++j) c += std::lgamma(static_cast<double>(j));
      est.constant_log = c;
      break;
    }
    case PresetId::RandomTurnsFixed: {
      // 2 (2k)^n (2/pi)^{k/2} (k/n)^{k^2+k/2} * endpoint factor, (1 + k/n)
      est.base_log = nd * std::log(2.0 * kd);
      est.n_power = fixed_power;
      est.constant_log = ln2 + 0.5 * kd * std::log(2.0 / std::numbers::pi) +
                         (kd * kd + 0.5 * kd) * std::log(kd) + detail::log_fixed_endpoint_factor(inst.u, *inst.v);
      correction_term = kd / nd;
      Coord sum = static_cast<Coord>(n);
      for (std::size_t j = 0; j < k; ++j) sum += inst.u[j] + (*inst.v)[j];
      supported = sum % 2 == 0;
      break;
    }
    case PresetId::RandomTurnsFree: {
      // (2k)^n (2/pi)^{k/2} (k/n)^{k^2/2} * free factor
      est.base_log = nd * std::log(2.0 * kd);
      est.n_power = free_power;
      est.constant_log = 0.5 * kd * std::log(2.0 / std::numbers::pi) + 0.5 * kd * kd * std::log(kd) +
                         detail::log_free_endpoint_factor(inst.u);
      break;
    }
    case PresetId::TangledIsolated:
    case PresetId::TangledNoIsolated: {
      // s^n (2/pi)^{k/2} (s/(n(2+8k)))^{k^2+k/2} prod (2j-1)!
      const bool idle = id == PresetId::TangledIsolated;
      const double s = (idle ? 1.0 : 0.0) + 2.0 * kd + 4.0 * kd * kd;
      est.base_log = nd * std::log(s);
      est.n_power = fixed_power;
      est.constant_log = 0.5 * kd * std::log(2.0 / std::numbers::pi) +
                         (kd * kd + 0.5 * kd) * std::log(s / (2.0 + 8.0 * kd)) + detail::log_odd_factorials(k);
      correction_term = idle ? s / (2.0 * nd * (1.0 + 4.0 * kd)) : (1.0 + 2.0 * kd * kd) / (nd * (1.0 + 4.0 * kd));
      break;
    }
  }
  if (correction && correction_term != 0.0) {
    est.constant_log += std::log1p(correction_term);
    est.correction_applied = true;
  }
  detail::finish(est, nd, supported);
  return est;
}

/// The general fixed/free end point formula evaluated on the preset instance
/// at the preset's n (mapped to the walk length).
inline AsymptoticEstimate preset_general_asym(const PresetInstance& inst, std::size_t n, bool correction = false) {
  const std::size_t length = inst.walk_length(n);
  return inst.v ? asym_fixed(inst.spec, inst.u, *inst.v, length, correction)
                : asym_free(inst.spec, inst.u, length);
}

}  // namespace chamberwalk
