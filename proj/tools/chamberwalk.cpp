// chamberwalk: exact counts, asymptotics, convergence tables, presets and
// verification suites for walks in the type-B chamber.
//
// Exit codes: 0 ok, 1 verification failure or count mismatch, 2 usage or
// invalid input, 3 state budget exceeded.

#include "chamberwalk/asym.hpp"
#include "chamberwalk/exact.hpp"
#include "chamberwalk/json_io.hpp"
#include "chamberwalk/presets.hpp"
#include "chamberwalk/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cw = chamberwalk;
using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

long parse_long(const std::string& s) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw cw::DomainError("not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw cw::DomainError("not an integer: '" + s + "'");
  return v;
}

std::size_t parse_count(const std::string& s) {
  const long v = parse_long(s);
  if (v < 0) throw cw::DomainError("expected a nonnegative integer, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

cw::ChamberPoint parse_point(const std::string& csv) {
  cw::Coords c;
  for (const auto& part : split(csv, ',')) c.push_back(parse_long(part));
  return cw::ChamberPoint(std::move(c));
}

/// "n", "a:b" or "a:b:s" (inclusive).
std::vector<std::size_t> parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) return {parse_count(parts[0])};
  if (parts.size() > 3) throw cw::DomainError("range must be n, a:b or a:b:s");
  const std::size_t a = parse_count(parts[0]), b = parse_count(parts[1]);
  const std::size_t s = parts.size() == 3 ? parse_count(parts[2]) : 1;
  if (s == 0) throw cw::DomainError("range step must be positive");
  if (b < a) throw cw::DomainError("range end precedes its start");
  std::vector<std::size_t> out;
  for (std::size_t n = a; n <= b; n += s) out.push_back(n);
  return out;
}

struct ModelArgs {
  std::string kind;
  long k = 0;
  std::string weights;
  std::string spec;
  std::string u;
  std::string v;

  void add_to(CLI::App* app, bool endpoints = true) {
    app->add_option("--kind", kind, "atomic steps: axis|diagonal");
    app->add_option("--k", k, "dimension");
    app->add_option("--weights", weights, "comma-separated w_0,w_1,... (integers or p/q)");
    app->add_option("--spec", spec, "spec as JSON text or @file");
    if (endpoints) {
      app->add_option("--u", u, "start point, comma-separated")->required();
      app->add_option("--v", v, "end point, comma-separated (omit for a free end point)");
    }
  }

  cw::CompositeSpec model() const {
    if (!spec.empty()) {
      std::string text = spec;
      if (text.front() == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw cw::DomainError("cannot read spec file '" + text.substr(1) + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
      }
      json j;
      try {
        j = json::parse(text);
      } catch (const json::parse_error& e) {
        throw cw::DomainError(std::string("spec is not valid JSON: ") + e.what());
      }
      return cw::spec_from_json(j);
    }
    if (kind.empty() || k <= 0 || weights.empty())
      throw cw::DomainError("model needs --kind, --k and --weights (or --spec)");
    std::vector<cw::Rational> w;
    for (const auto& part : split(weights, ',')) w.push_back(cw::parse_rational(part));
    return cw::CompositeSpec(cw::parse_atomic_kind(kind), static_cast<std::size_t>(k), std::move(w));
  }

  cw::ChamberPoint start(const cw::CompositeSpec& s) const {
    cw::ChamberPoint p = parse_point(u);
    cw::require_admissible(s, p);
    return p;
  }

  std::optional<cw::ChamberPoint> end(const cw::CompositeSpec& s) const {
    if (v.empty()) return std::nullopt;
    cw::ChamberPoint p = parse_point(v);
    cw::require_admissible(s, p);
    return p;
  }
};

cw::CountOptions count_options() {
  cw::CountOptions opts;
  if (const char* env = std::getenv("CHAMBER_THREADS")) {
    try {
      opts.threads = static_cast<unsigned>(parse_count(env));
    } catch (const cw::DomainError&) {
      throw cw::DomainError("CHAMBER_THREADS must be a nonnegative integer");
    }
  }
  return opts;
}

json query_json(const cw::CompositeSpec& spec, const cw::ChamberPoint& u, const std::optional<cw::ChamberPoint>& v) {
  json q = cw::to_json(spec);
  q["u"] = cw::to_json(u);
  q["v"] = v ? cw::to_json(*v) : json(nullptr);
  return q;
}

void emit(const json& j) { std::cout << j.dump() << '\n'; }

int cmd_count(const ModelArgs& m, const std::string& n_text, const std::string& method) {
  if (method != "dp" && method != "reflection" && method != "both")
    throw cw::DomainError("--method must be dp, reflection or both");
  const auto spec = m.model();
  const auto u = m.start(spec);
  const auto v = m.end(spec);
  const auto lengths = parse_range(n_text);
  const auto opts = count_options();
  std::size_t n_max = 0;
  for (auto n : lengths) n_max = std::max(n_max, n);

  std::vector<cw::CountValue> dp;
  if (method != "reflection") dp = cw::confined_series(spec, u, v, n_max, opts);
  std::optional<cw::StepPowerTable> table;
  if (method != "dp") table.emplace(spec, n_max, true, opts);

  int status = 0;
  for (std::size_t n : lengths) {
    json row = query_json(spec, u, v);
    row["n"] = n;
    row["method"] = method;
    std::optional<cw::CountValue> refl;
    if (table) refl = v ? cw::count_reflection(*table, u, *v, n) : cw::count_reflection_free(*table, spec, u, n);
    if (method == "dp") {
      row["count"] = cw::to_string(dp[n]);
    } else if (method == "reflection") {
      row["count"] = cw::to_string(*refl);
    } else {
      const bool match = *refl == dp[n];
      row["count"] = cw::to_string(dp[n]);
      row["dp"] = cw::to_string(dp[n]);
      row["reflection"] = cw::to_string(*refl);
      row["match"] = match;
      if (!match) status = kExitFailure;
    }
    emit(row);
  }
  return status;
}

int cmd_asym(const ModelArgs& m, std::size_t n, const std::string& correction) {
  if (correction != "on" && correction != "off") throw cw::DomainError("--correction must be on or off");
  const auto spec = m.model();
  const auto u = m.start(spec);
  const auto v = m.end(spec);
  const auto est = v ? cw::asym_fixed(spec, u, *v, n, correction == "on") : cw::asym_free(spec, u, n);
  json row = query_json(spec, u, v);
  row["n"] = n;
  row["estimate"] = cw::to_json(est);
  if (!v && correction == "on") row["note"] = "no correction term for a free end point";
  emit(row);
  return 0;
}

int cmd_compare(const ModelArgs& m, const std::string& grid, const std::string& format) {
  if (format != "json" && format != "csv") throw cw::DomainError("--format must be json or csv");
  const auto spec = m.model();
  const auto u = m.start(spec);
  const auto v = m.end(spec);
  const auto report = cw::compare_series(spec, u, v, parse_range(grid), count_options());
  if (format == "csv") {
    cw::write_csv(std::cout, report);
  } else {
    json out = query_json(spec, u, v);
    out["report"] = cw::to_json(report);
    std::cout << out.dump() << '\n';
  }
  return 0;
}

int cmd_preset(const std::string& name, std::size_t k, std::size_t n, const std::string& u_text,
               const std::string& v_text, const std::string& correction) {
  if (correction != "on" && correction != "off") throw cw::DomainError("--correction must be on or off");
  const cw::PresetId id = cw::parse_preset(name);
  cw::Endpoints ep;
  if (!u_text.empty()) ep.u = parse_point(u_text);
  if (!v_text.empty()) ep.v = parse_point(v_text);
  const cw::PresetInstance inst = cw::preset_spec(id, k, ep);
  const std::size_t length = inst.walk_length(n);
  const auto opts = count_options();
  const cw::CountValue exact =
      inst.v ? cw::count_confined(inst.spec, inst.u, *inst.v, length, opts) : cw::count_confined_free(inst.spec, inst.u, length, opts);

  json out = query_json(inst.spec, inst.u, inst.v);
  out["preset"] = name;
  out["n"] = n;
  out["length"] = length;
  out["exact"] = cw::to_string(exact);
  if (n == 0) {
    out["note"] = "asymptotics need n >= 1";
  } else {
    const auto est = cw::preset_asym(id, k, n, ep, correction == "on");
    out["asym"] = cw::to_json(est);
    out["general_asym"] = cw::to_json(cw::preset_general_asym(inst, n, correction == "on"));
    if (est.supported && exact > 0) {
      const double diff = cw::log_abs(exact) - est.log_value;
      out["ratio"] = std::exp(diff);
    } else {
      out["ratio"] = nullptr;
    }
  }
  emit(out);
  return 0;
}

int cmd_verify(const std::string& suites, std::uint64_t seed) {
  std::vector<std::string> names = split(suites, ',');
  for (const auto& s : names)
    if (std::find(cw::suite_names().begin(), cw::suite_names().end(), s) == cw::suite_names().end())
      throw cw::DomainError("unknown suite '" + s + "'");
  const auto opts = count_options();
  bool all = true;
  for (const auto& s : names) {
    const auto result = cw::run_suite(s, seed, opts);
    json j = cw::to_json(result);
    j["seed"] = seed;
    emit(j);
    all = all && result.pass();
  }
  return all ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and asymptotic counts of walks in the type-B Weyl chamber"};
  app.require_subcommand(1);

  ModelArgs count_model, asym_model, compare_model;
  std::string n_text, method = "both", correction = "off", grid, format = "json";
  std::size_t n = 0;

  auto* count = app.add_subcommand("count", "exact confined counts");
  count_model.add_to(count);
  count->add_option("--n", n_text, "length, a:b or a:b:s")->required();
  count->add_option("--method", method, "dp|reflection|both")->capture_default_str();

  auto* asym = app.add_subcommand("asym", "leading asymptotic term");
  asym_model.add_to(asym);
  std::size_t asym_n = 0;
  asym->add_option("--n", asym_n, "length")->required();
  asym->add_option("--correction", correction, "on|off")->capture_default_str();

  auto* compare = app.add_subcommand("compare", "exact counts against the asymptotic term over a grid");
  compare_model.add_to(compare);
  compare->add_option("--grid", grid, "start:stop:step")->required();
  compare->add_option("--format", format, "json|csv")->capture_default_str();

  auto* preset = app.add_subcommand("preset", "named vicious walker / tangled diagram models");
  std::string preset_name, preset_u, preset_v, preset_correction = "off";
  std::size_t preset_k = 0;
  preset->add_option("name", preset_name, "preset name")->required();
  preset->add_option("--k", preset_k, "number of walkers / dimension")->required();
  preset->add_option("--n", n, "preset length parameter")->required();
  preset->add_option("--u", preset_u, "start point override");
  preset->add_option("--v", preset_v, "end point override");
  preset->add_option("--correction", preset_correction, "on|off")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run verification suites");
  std::string suite_list;
  std::uint64_t seed = 7;
  verify->add_option("--suite", suite_list, "comma-separated: oracle,det,schur,selberg,dsin,signs,consistency")
      ->required();
  verify->add_option("--seed", seed, "random seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  std::cout.precision(17);
  try {
    if (*count) return cmd_count(count_model, n_text, method);
    if (*asym) return cmd_asym(asym_model, asym_n, correction);
    if (*compare) return cmd_compare(compare_model, grid, format);
    if (*preset) return cmd_preset(preset_name, preset_k, n, preset_u, preset_v, preset_correction);
    if (*verify) return cmd_verify(suite_list, seed);
  } catch (const cw::ResourceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const cw::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cw::DiagnosticError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
