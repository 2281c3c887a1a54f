// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "chamberwalk/asym.hpp"
#include "chamberwalk/detlab.hpp"
#include "chamberwalk/exact.hpp"
#include "chamberwalk/presets.hpp"
#include "chamberwalk/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace chamberwalk;

namespace {

constexpr std::uint64_t kSeed = 7;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void run(int id, const std::string& title, double time_limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out{false, ""};
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > time_limit_s) {
    out.pass = false;
    out.detail += " [over time limit]";
  }
  if (!out.pass) ++failures;
  std::printf("[%s] %d %s: %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", id, title.c_str(), out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string suite_detail(const SuiteResult& s) {
  std::ostringstream os;
  os << s.name << " " << (s.reports.size() - s.failures()) << "/" << s.reports.size();
  for (const auto& r : s.reports)
    if (!r.pass) os << "; failed " << to_json(r).dump();
  return os.str();
}

std::vector<std::size_t> grid(std::size_t a, std::size_t b, std::size_t step) {
  std::vector<std::size_t> g;
  for (std::size_t n = a; n <= b; n += step) g.push_back(n);
  return g;
}

/// |delta| strictly decreasing and slope within [lo, hi].
Outcome convergence(const std::string& label, const ConvergenceReport& r, double lo, double hi) {
  bool monotone = true;
  for (std::size_t i = 1; i < r.rows.size(); ++i)
    if (!(std::fabs(r.rows[i].residual) < std::fabs(r.rows[i - 1].residual))) monotone = false;
  const bool in_range = r.fitted_slope >= lo && r.fitted_slope <= hi;
  std::ostringstream os;
  os.precision(4);
  os << label << ": slope " << r.fitted_slope << ", |delta| " << std::fabs(r.rows.front().residual) << " -> "
     << std::fabs(r.rows.back().residual) << (monotone ? " decreasing" : " NOT decreasing") << " over "
     << r.rows.size() << " rows";
  return {monotone && in_range, os.str()};
}

Outcome both(const Outcome& a, const Outcome& b) { return {a.pass && b.pass, a.detail + "; " + b.detail}; }

}  // namespace

int main() {
  run(1, "reflection principle equals confined DP (8 presets x 10 pairs x k=1..3)", 60, [] {
    const auto s = suite_oracle(kSeed, 10);
    return Outcome{s.pass(), suite_detail(s)};
  });

  run(2, "Catalan and central binomial sequences", 60, [] {
    const CompositeSpec spec(AtomicKind::Diagonal, 1, {0, 1});
    const ChamberPoint one({1});
    const std::vector<long> catalan = {1, 2, 5, 14, 42, 132, 429, 1430};
    const std::vector<long> central = {1, 2, 3, 6, 10, 20, 35, 70, 126, 252, 462, 924};
    const auto fixed = confined_series(spec, one, one, 16);
    const auto free = confined_series(spec, one, std::nullopt, 12);
    bool ok = true;
    for (std::size_t i = 0; i < catalan.size(); ++i) {
      const std::size_t n = 2 * (i + 1);
      ok = ok && fixed[n] == catalan[i] && count_reflection(spec, one, one, n) == catalan[i];
    }
    for (std::size_t n = 1; n <= 12; ++n)
      ok = ok && free[n] == central[n - 1] && count_reflection_free(spec, one, n) == central[n - 1];
    return Outcome{ok, "lengths 2..16 (fixed) and 1..12 (free), DP and reflection"};
  });

  run(3, "fixed end point leading term (watermelon k=1, k=2)", 300, [] {
    const auto w1 = preset_spec(PresetId::Watermelon, 1);
    const auto w2 = preset_spec(PresetId::Watermelon, 2);
    const auto r1 = compare_series(w1.spec, w1.u, w1.v, {16, 32, 64, 128});
    const auto r2 = compare_series(w2.spec, w2.u, w2.v, grid(20, 200, 20));
    return both(convergence("k=1", r1, -1.6, -0.6), convergence("k=2", r2, -1.6, -0.6));
  });

  run(4, "free end point leading term (k=1 u=(1), star k=2)", 300, [] {
    const CompositeSpec lock(AtomicKind::Diagonal, 1, {0, 1});
    const auto star = preset_spec(PresetId::Star, 2);
    const auto r1 = compare_series(lock, ChamberPoint({1}), std::nullopt, grid(16, 256, 16));
    const auto r2 = compare_series(star.spec, star.u, std::nullopt, grid(16, 128, 16));
    return both(convergence("k=1", r1, -1.5, -0.5), convergence("star k=2", r2, -1.5, -0.5));
  });

  run(5, "corollary formulas match the general theorems (k<=4, n in {10,100,1000})", 5, [] {
    const auto s = suite_consistency(1e-10);
    double worst = 0;
    for (const auto& r : s.reports)
      if (const auto* d = std::get_if<double>(&r.residual)) worst = std::max(worst, std::fabs(*d));
    std::ostringstream os;
    os << suite_detail(s) << ", max |log difference| " << worst;
    return Outcome{s.pass(), os.str()};
  });

  run(6, "exact determinant and character identities (20 seeded instances each)", 30, [] {
    const auto det = suite_det(kSeed, 20);
    const auto schur = suite_schur(kSeed, 20);
    return Outcome{det.pass() && schur.pass(), suite_detail(det) + "; " + suite_detail(schur)};
  });

  run(7, "determinant asymptotics O(eps^2) and sine sign reflection", 60, [] {
    const auto dsin = suite_dsin();
    const auto signs = suite_signs(kSeed);
    std::ostringstream os;
    os.precision(4);
    os << suite_detail(dsin) << " (halving factors";
    for (const auto& r : dsin.reports)
      if (r.details.contains("factor")) os << " " << r.details["factor"].get<double>();
    os << "); " << suite_detail(signs);
    return Outcome{dsin.pass() && signs.pass(), os.str()};
  });

  run(8, "Selberg closed forms and Monte Carlo (1e6 samples)", 60, [] {
    const auto s = suite_selberg(kSeed, 1'000'000);
    return Outcome{s.pass(), suite_detail(s)};
  });

  run(9, "second-order coefficient of watermelon k=1 near -9/4 (n >= 64)", 120, [] {
    const auto w = preset_spec(PresetId::Watermelon, 1);
    const auto r = compare_series(w.spec, w.u, w.v, grid(64, 512, 32));
    const double a = second_order_coefficient(r, 64);
    std::ostringstream os;
    os << "fitted coefficient " << a << " vs -2.25 (relative error " << std::fabs(a / -2.25 - 1) << ")";
    return Outcome{std::fabs(a / -2.25 - 1) <= 0.15, os.str()};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
