#pragma once

// Seeded verification suites shared by the CLI and the acceptance runner.
// Each suite returns every report it produced; a suite passes iff all do.

#include "chamberwalk/asym.hpp"
#include "chamberwalk/detlab.hpp"
#include "chamberwalk/exact.hpp"
#include "chamberwalk/json_io.hpp"
#include "chamberwalk/presets.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace chamberwalk {

struct SuiteResult {
  std::string name;
  std::vector<IdentityReport> reports;

  bool pass() const {
    return !reports.empty() && std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
  }
  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(reports.begin(), reports.end(), [](const auto& r) { return !r.pass; }));
  }
};

/// {"suite", "pass", "checked", "failed", "failures": [...]}.
inline nlohmann::json to_json(const SuiteResult& s) {
  auto failures = nlohmann::json::array();
  for (const auto& r : s.reports)
    if (!r.pass) failures.push_back(to_json(r));
  return {{"suite", s.name}, {"pass", s.pass()}, {"checked", s.reports.size()}, {"failed", s.failures()},
          {"failures", failures}};
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"oracle", "det", "schur", "selberg", "dsin", "signs", "consistency"};
  return names;
}

namespace detail {

using Rng = std::mt19937_64;

inline long uniform_int(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

/// A random chamber lattice point of the spec with coordinates at most `height`.
inline ChamberPoint random_chamber_point(Rng& rng, const CompositeSpec& spec, Coord height) {
  const std::size_t k = spec.dim();
  const bool diagonal = spec.kind() == AtomicKind::Diagonal;
  const Coord parity = diagonal ? uniform_int(rng, 0, 1) : 0;
  std::vector<Coord> pool;
  for (Coord x = 1; x <= height; ++x)
    if (!diagonal || x % 2 == (parity == 0 ? 0 : 1)) pool.push_back(x);
  if (pool.size() < k) throw DomainError("height too small for a random chamber point");
  std::shuffle(pool.begin(), pool.end(), rng);
  Coords c(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(c.begin(), c.end());
  return ChamberPoint(std::move(c));
}

/// Random v in the same parity class as u (diagonal lattice points must be
/// reachable from u).
inline ChamberPoint random_partner(Rng& rng, const CompositeSpec& spec, const ChamberPoint& u, Coord height) {
  while (true) {
    ChamberPoint v = random_chamber_point(rng, spec, height);
    if (spec.kind() == AtomicKind::Axis || (v[0] - u[0]) % 2 == 0) return v;
  }
}

inline Rational random_rational(Rng& rng) {
  long num = 0;
  while (num == 0) num = uniform_int(rng, -9, 9);
  return ratio(num, uniform_int(rng, 1, 9));
}

inline std::vector<Rational> random_rationals(Rng& rng, std::size_t k) {
  std::vector<Rational> v(k);
  for (auto& x : v) x = random_rational(rng);
  return v;
}

/// Exact agreement of two count series indexed by n = 0..n_max; the residual
/// is the difference at the first mismatch.
inline IdentityReport series_match_report(std::string name, nlohmann::json params,
                                          const std::vector<CountValue>& reflection,
                                          const std::vector<CountValue>& dp) {
  IdentityReport r;
  r.identity = std::move(name);
  params["n_max"] = reflection.size() - 1;
  r.params = std::move(params);
  r.pass = true;
  r.residual = Rational(0);
  for (std::size_t n = 0; n < reflection.size(); ++n) {
    if (reflection[n] == dp[n]) continue;
    r.pass = false;
    r.residual = Rational(reflection[n] - dp[n]);
    r.details = {{"n", n}, {"reflection", to_string(reflection[n])}, {"dp", to_string(dp[n])}};
    break;
  }
  return r;
}

}  // namespace detail

/// Reflection-principle counts against the confined DP for every preset
/// model, k in {1,2,3}, `pairs` random (u, v) each, all n <= 10 (16 for k=1).
/// Free-end presets also compare the free end point totals.
inline SuiteResult suite_oracle(std::uint64_t seed, std::size_t pairs = 10, const CountOptions& opts = {}) {
  SuiteResult out{"oracle", {}};
  detail::Rng rng(seed);
  for (PresetId id : kAllPresets) {
    for (std::size_t k = 1; k <= 3; ++k) {
      const CompositeSpec spec = preset_model(id, k);
      const std::size_t n_max = k == 1 ? 16 : 10;
      const StepPowerTable table(spec, n_max, true, opts);
      const Coord height = static_cast<Coord>(2 * k + 4);
      for (std::size_t p = 0; p < pairs; ++p) {
        const ChamberPoint u = detail::random_chamber_point(rng, spec, height);
        const ChamberPoint v = detail::random_partner(rng, spec, u, height);
        const auto dp = confined_series(spec, u, v, n_max, opts);
        std::vector<CountValue> refl;
        for (std::size_t n = 0; n <= n_max; ++n) refl.push_back(count_reflection(table, u, v, n));
        out.reports.push_back(detail::series_match_report(
            "reflection_equals_dp", {{"preset", preset_name(id)}, {"k", k}, {"u", to_json(u)}, {"v", to_json(v)}},
            refl, dp));
        if (!preset_has_free_end(id)) continue;
        const auto dp_free = confined_series(spec, u, std::nullopt, n_max, opts);
        std::vector<CountValue> refl_free;
        for (std::size_t n = 0; n <= n_max; ++n) refl_free.push_back(count_reflection_free(table, spec, u, n));
        out.reports.push_back(detail::series_match_report(
            "reflection_equals_dp_free", {{"preset", preset_name(id)}, {"k", k}, {"u", to_json(u)}}, refl_free,
            dp_free));
      }
    }
  }
  return out;
}

/// Determinant evaluations, the quotient identity and mixed Vandermonde
/// nonzeroness at `instances` random rational points each, k <= 4.
inline SuiteResult suite_det(std::uint64_t seed, std::size_t instances = 20) {
  SuiteResult out{"det", {}};
  detail::Rng rng(seed);
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t k = static_cast<std::size_t>(detail::uniform_int(rng, 1, 4));
    std::vector<Rational> z;
    do z = detail::random_rationals(rng, k);
    while (detail::has_repeats(z));
    out.reports.push_back(check_typeC_det_identity(z, false));
  }
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t k = static_cast<std::size_t>(detail::uniform_int(rng, 1, 4));
    std::vector<Rational> t;
    do t = detail::random_rationals(rng, k);
    while (detail::has_repeats(detail::squares(t)));
    out.reports.push_back(check_typeC_det_identity(t, true));
  }
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t k = static_cast<std::size_t>(detail::uniform_int(rng, 1, 4));
    while (true) {
      const auto z = detail::random_rationals(rng, k);
      try {
        out.reports.push_back(quotient_identity_check(z));
        break;
      } catch (const DomainError&) {
        // pole configuration, draw again
      }
    }
  }
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t k = static_cast<std::size_t>(detail::uniform_int(rng, 1, 4));
    const std::size_t a = static_cast<std::size_t>(detail::uniform_int(rng, 0, static_cast<long>(k)));
    std::vector<Rational> u;
    do {
      u.clear();
      for (std::size_t j = 0; j < k; ++j) u.push_back(ratio(detail::uniform_int(rng, 1, 30), detail::uniform_int(rng, 1, 6)));
      std::sort(u.begin(), u.end());
    } while (detail::has_repeats(u));
    out.reports.push_back(mixed_vandermonde_check(u, a));
  }
  return out;
}

/// Schur/odd orthogonal summation identity, k <= 3, c <= 2.
inline SuiteResult suite_schur(std::uint64_t seed, std::size_t instances = 20) {
  SuiteResult out{"schur", {}};
  detail::Rng rng(seed);
  while (out.reports.size() < instances) {
    const std::size_t k = static_cast<std::size_t>(detail::uniform_int(rng, 1, 3));
    const unsigned c = static_cast<unsigned>(detail::uniform_int(rng, 0, 2));
    try {
      out.reports.push_back(schur_orthogonal_identity_check(detail::random_rationals(rng, k), c));
    } catch (const DomainError&) {
      // degenerate draw
    }
  }
  return out;
}

/// Selberg closed forms at k=1 and Monte Carlo at k=2 (one and Aomoto, both
/// weights).
inline SuiteResult suite_selberg(std::uint64_t seed, std::size_t samples = 1'000'000) {
  SuiteResult out{"selberg", {}};
  const auto closed = [](SelbergWeight w, double expected) {
    IdentityReport r;
    r.identity = "selberg_closed_form_" + to_string(w);
    r.params = {{"k", 1}};
    const double got = selberg_closed_form(1, w);
    r.residual = got - expected;
    r.details = {{"value", got}, {"expected", expected}};
    r.pass = std::fabs(got - expected) <= 4 * std::numeric_limits<double>::epsilon() * expected;
    return r;
  };
  out.reports.push_back(closed(SelbergWeight::Laguerre, std::sqrt(std::numbers::pi) / 2));
  out.reports.push_back(closed(SelbergWeight::Hermite, std::sqrt(2 * std::numbers::pi)));
  for (SelbergWeight w : {SelbergWeight::Laguerre, SelbergWeight::Hermite})
    for (SelbergQuantity q : {SelbergQuantity::One, SelbergQuantity::Aomoto})
      out.reports.push_back(selberg_mc_check(2, w, q, samples, seed));
  return out;
}

/// O(eps^2) decay of the sine and Gaussian kernel determinant ratios for
/// k in {1,2,3}, eps in {0.1, 0.05, 0.025}: each halving shrinks the
/// residual by a factor in [3,5].
inline SuiteResult suite_dsin() {
  SuiteResult out{"dsin", {}};
  const std::vector<double> grid = {0.1, 0.05, 0.025};
  for (std::size_t k = 1; k <= 3; ++k) {
    std::vector<long> u;
    std::vector<double> dir;
    for (std::size_t j = 1; j <= k; ++j) {
      u.push_back(static_cast<long>(j));
      dir.push_back(static_cast<double>(j));
    }
    for (int which = 0; which < 2; ++which) {
      std::vector<IdentityReport> evals;
      for (double e : grid) {
        evals.push_back(which == 0 ? dsin_leading_ratio(u, dir, e) : gaussian_kernel_det_ratio(k, e));
        out.reports.push_back(evals.back());
      }
      for (std::size_t i = 0; i + 1 < evals.size(); ++i) {
        IdentityReport r;
        r.identity = evals[i].identity + "_halving";
        r.params = {{"k", k}, {"eps", grid[i]}, {"eps_half", grid[i + 1]}};
        const double f = halving_factor(evals[i], evals[i + 1]);
        r.residual = f - 4.0;
        r.details = {{"factor", f}};
        r.pass = f >= 3.0 && f <= 5.0;
        out.reports.push_back(r);
      }
    }
  }
  return out;
}

/// Sine determinant reflection through every maximal point of every preset
/// model, k in {1,2,3}, random admissible u and random small phi.
inline SuiteResult suite_signs(std::uint64_t seed, std::size_t draws = 5) {
  SuiteResult out{"signs", {}};
  detail::Rng rng(seed);
  std::uniform_real_distribution<double> angle(-0.5, 0.5);
  for (PresetId id : kAllPresets) {
    for (std::size_t k = 1; k <= 3; ++k) {
      const CompositeSpec spec = preset_model(id, k);
      for (const auto& eps : maximal_points(spec).points) {
        for (std::size_t d = 0; d < draws; ++d) {
          const ChamberPoint u = detail::random_chamber_point(rng, spec, static_cast<Coord>(2 * k + 6));
          std::vector<long> uu(u.coords().begin(), u.coords().end());
          std::vector<double> phi(k);
          for (auto& p : phi) p = angle(rng);
          IdentityReport r = sign_identity_check(uu, eps, phi);
          r.params["preset"] = preset_name(id);
          out.reports.push_back(std::move(r));
        }
      }
    }
  }
  return out;
}

/// Each preset's closed form against the general fixed/free end point
/// formula on the preset instance, k <= 4, n in {10, 100, 1000}.
inline SuiteResult suite_consistency(double tolerance = 1e-10) {
  SuiteResult out{"consistency", {}};
  for (PresetId id : kAllPresets) {
    for (std::size_t k = 1; k <= 4; ++k) {
      Endpoints ep;
      if (!preset_fixes_endpoints(id)) {
        // walkers at heights 0, 2, ... for the lock-step family, 1..k otherwise
        const bool lock_step = id == PresetId::LockStepFixed || id == PresetId::LockStepFree;
        ep.u = lock_step ? odd_heights(k) : consecutive(k);
        if (!preset_has_free_end(id)) ep.v = ep.u;
      }
      const PresetInstance inst = preset_spec(id, k, ep);
      for (std::size_t n : {10, 100, 1000}) {
        const AsymptoticEstimate a = preset_asym(id, k, n, ep);
        const AsymptoticEstimate b = preset_general_asym(inst, n);
        IdentityReport r;
        r.identity = "corollary_matches_general";
        r.params = {{"preset", preset_name(id)}, {"k", k}, {"n", n}};
        if (a.supported != b.supported) {
          r.residual = std::numeric_limits<double>::infinity();
          r.pass = false;
          r.note = "support flags differ";
        } else if (!a.supported) {
          r.residual = 0.0;
          r.pass = true;
          r.note = "length outside the supported parity class";
        } else {
          const double diff = a.log_value - b.log_value;
          r.residual = diff;
          r.details = {{"preset_log", a.log_value}, {"general_log", b.log_value}};
          r.pass = std::fabs(diff) <= tolerance;
        }
        out.reports.push_back(std::move(r));
      }
    }
  }
  return out;
}

/// Runs a suite by CLI name; throws DomainError for unknown names.
inline SuiteResult run_suite(const std::string& name, std::uint64_t seed, const CountOptions& opts = {}) {
  if (name == "oracle") return suite_oracle(seed, 10, opts);
  if (name == "det") return suite_det(seed);
  if (name == "schur") return suite_schur(seed);
  if (name == "selberg") return suite_selberg(seed);
  if (name == "dsin") return suite_dsin();
  if (name == "signs") return suite_signs(seed);
  if (name == "consistency") return suite_consistency();
  throw DomainError("unknown suite '" + name + "'");
}

}  // namespace chamberwalk
