#pragma once

// JSON and CSV serialization. Exact values are always written as strings.

#include "chamberwalk/asym.hpp"
#include "chamberwalk/detlab.hpp"
#include "chamberwalk/numeric.hpp"
#include "chamberwalk/stepmodel.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

namespace chamberwalk {

/// {"kind":"axis"|"diagonal","k":int,"weights":["p/q",...]}
inline nlohmann::json to_json(const CompositeSpec& spec) {
  auto w = nlohmann::json::array();
  for (const auto& q : spec.weights()) w.push_back(to_string(q));
  return {{"kind", to_string(spec.kind())}, {"k", spec.dim()}, {"weights", w}};
}

inline Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw DomainError("weights must be integers or rational strings");
}

inline CompositeSpec spec_from_json(const nlohmann::json& j) {
  try {
    std::vector<Rational> weights;
    for (const auto& w : j.at("weights")) weights.push_back(rational_from_json(w));
    const long k = j.at("k").get<long>();
    if (k <= 0) throw DomainError("k must be positive");
    return CompositeSpec(parse_atomic_kind(j.at("kind").get<std::string>()), static_cast<std::size_t>(k),
                         std::move(weights));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed spec JSON: ") + e.what());
  }
}

inline nlohmann::json to_json(const ChamberPoint& p) { return p.coords(); }

/// Shortest decimal that round-trips, for values below 1e300.
inline std::string decimal_or_empty(double log_value) {
  if (!std::isfinite(log_value) || log_value >= 300.0 * std::log(10.0)) return {};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", std::exp(log_value));
  return buf;
}

inline nlohmann::json to_json(const AsymptoticEstimate& est) {
  nlohmann::json j;
  j["supported"] = est.supported;
  j["n_power"] = to_string(est.n_power);
  j["correction"] = est.correction_applied;
  if (est.supported) {
    j["log_value"] = est.log_value;
    j["log10_value"] = est.log_value / std::log(10.0);
    const std::string dec = decimal_or_empty(est.log_value);
    if (!dec.empty()) j["value"] = dec;
  }
  return j;
}

inline nlohmann::json to_json(const ConvergenceRow& row) {
  return {{"n", row.n},
          {"exact", to_string(row.exact)},
          {"exact_log", row.exact_log},
          {"asym_log", row.asym_log},
          {"ratio", row.ratio},
          {"residual", row.residual}};
}

inline nlohmann::json to_json(const ConvergenceReport& report) {
  auto rows = nlohmann::json::array();
  for (const auto& r : report.rows) rows.push_back(to_json(r));
  return {{"rows", rows}, {"fitted_slope", report.fitted_slope}, {"fitted_intercept", report.fitted_intercept}};
}

inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_double(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << x;
  return os.str();
}

/// Header plus one line per row; counts are quoted strings.
inline void write_csv(std::ostream& os, const ConvergenceReport& report) {
  os << "n,exact,exact_log,asym_log,ratio,residual\n";
  for (const auto& r : report.rows)
    os << r.n << ',' << csv_quote(to_string(r.exact)) << ',' << csv_double(r.exact_log) << ','
       << csv_double(r.asym_log) << ',' << csv_double(r.ratio) << ',' << csv_double(r.residual) << '\n';
}

}  // namespace chamberwalk
