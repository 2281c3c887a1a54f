#pragma once

// Exact walk counts.
//
//   count_unconstrained  [z^{v-u}] S(z)^n over the whole lattice
//   count_reflection     signed sum of unconstrained counts over the
//                        hyperoctahedral group (signed permutations of u)
//   count_confined       dynamic programming inside the open chamber
//
// The confined DP enforces confinement at atomic granularity: every atomic
// position visited inside a composite step must itself lie strictly inside
// the chamber. Reflection and DP agree exactly under this convention.
//
// Rational weights are handled by scaling P to integer coefficients with the
// common denominator L and dividing the final count by L^n, so all inner loops
// run on big integers.

#include "chamberwalk/numeric.hpp"
#include "chamberwalk/stepmodel.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <thread>
#include <unordered_map>
#include <vector>

namespace chamberwalk {

using CountValue = Rational;
using FrontierDistribution = std::map<ChamberPoint, CountValue>;

struct CountOptions {
  /// Refuse computations needing more states than this.
  std::size_t state_budget = 10'000'000;
  /// Worker threads for the confined DP; 0 picks hardware concurrency.
  unsigned threads = 1;
};

enum class ReflectionMode {
  Table,  ///< one table of S^n, looked up at v - rho(u) for every rho
  Naive,  ///< independent forward propagation from every signed image
};

namespace detail {

struct CoordsHash {
  std::size_t operator()(const Coords& c) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Coord x : c) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs body(begin, end) over [0, n) split into contiguous chunks.
inline void parallel_chunks(std::size_t n, unsigned threads,
                            const std::function<void(std::size_t, std::size_t)>& body) {
  constexpr std::size_t kMinChunk = 4096;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n / kMinChunk + 1)));
  if (threads == 1) {
    body(0, n);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t b = t * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
}

/// Every signed permutation rho of the coordinates of u together with its sign
/// prod(eps_j) * sgn(sigma).
inline void for_each_signed_image(const Coords& u,
                                  const std::function<void(const Coords&, int)>& visit) {
  const std::size_t k = u.size();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    int perm_sign = 1;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b)
        if (perm[a] > perm[b]) perm_sign = -perm_sign;
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      Coords image(k);
      int sign = perm_sign;
      for (std::size_t j = 0; j < k; ++j) {
        const bool flip = (mask >> j) & 1;
        image[j] = flip ? -u[perm[j]] : u[perm[j]];
        if (flip) sign = -sign;
      }
      visit(image, sign);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
}

inline std::vector<std::pair<Coords, Integer>> integer_step_distribution(const CompositeSpec& spec) {
  std::vector<std::pair<Coords, Integer>> out;
  for (const auto& [d, c] : displacement_distribution(spec))
    out.emplace_back(d, Integer(c * spec.denominator()));
  return out;
}

inline void check_points(const CompositeSpec& spec, const Coords& u, const Coords& v) {
  if (u.size() != spec.dim() || v.size() != spec.dim())
    throw DomainError("dimension mismatch between points and spec");
  if (!lattice_contains(spec, LatticePoint{u}) || !lattice_contains(spec, LatticePoint{v}))
    throw DomainError("point is not in the lattice of the step set");
}

}  // namespace detail

/// Coefficients of (L*S(z))^t for t = 0..max_power, each stored densely over
/// the box [-max_power*d, max_power*d]^k.
class StepPowerTable {
 public:
  StepPowerTable(const CompositeSpec& spec, std::size_t max_power, bool keep_all = true,
                 const CountOptions& opts = {})
      : spec_(spec), max_power_(max_power), keep_all_(keep_all) {
    const std::size_t k = spec.dim();
    radius_ = static_cast<Coord>(max_power * spec.degree());
    side_ = static_cast<std::size_t>(2 * radius_ + 1);
    std::size_t cells = 1;
    for (std::size_t j = 0; j < k; ++j) {
      if (cells > opts.state_budget / side_)
        throw ResourceError("unconstrained coefficient box exceeds the state budget");
      cells *= side_;
    }
    if (cells * (keep_all ? max_power + 1 : 2) > opts.state_budget * 4)
      throw ResourceError("unconstrained coefficient tables exceed the state budget");
    stride_.assign(k, 1);
    for (std::size_t j = k; j-- > 1;) stride_[j - 1] = stride_[j] * side_;
    cells_ = cells;

    std::vector<std::pair<std::ptrdiff_t, Integer>> step;
    for (auto& [d, c] : detail::integer_step_distribution(spec)) step.emplace_back(offset(d), c);

    std::vector<Integer> cur(cells_);
    cur[index(Coords(k, 0))] = 1;
    if (keep_all_) powers_.push_back(cur);
    for (std::size_t t = 1; t <= max_power_; ++t) {
      std::vector<Integer> next(cells_);
      for (std::size_t i = 0; i < cells_; ++i) {
        if (mpz_sgn(cur[i].get_mpz_t()) == 0) continue;
        for (const auto& [off, c] : step)
          mpz_addmul(next[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + off)].get_mpz_t(),
                     cur[i].get_mpz_t(), c.get_mpz_t());
      }
      cur = std::move(next);
      if (keep_all_) powers_.push_back(cur);
    }
    if (!keep_all_) powers_.push_back(std::move(cur));
  }

  std::size_t max_power() const { return max_power_; }
  const Integer& denominator() const { return spec_.denominator(); }

  /// Integer-scaled coefficient of z^disp in (L*S)^t.
  Integer scaled_coefficient(std::size_t t, const Coords& disp) const {
    if (t > max_power_) throw DomainError("power beyond table range");
    const std::vector<Integer>* table = nullptr;
    if (keep_all_)
      table = &powers_[t];
    else if (t == max_power_)
      table = &powers_.back();
    else
      throw DomainError("table only holds the final power");
    const Coord reach = static_cast<Coord>(t * spec_.degree());
    for (Coord x : disp)
      if (x > reach || x < -reach) return 0;
    return (*table)[index(disp)];
  }

  CountValue coefficient(std::size_t t, const Coords& disp) const {
    return ratio(scaled_coefficient(t, disp), pow(spec_.denominator(), t));
  }

 private:
  std::size_t index(const Coords& c) const {
    std::size_t i = 0;
    for (std::size_t j = 0; j < c.size(); ++j) i += static_cast<std::size_t>(c[j] + radius_) * stride_[j];
    return i;
  }
  std::ptrdiff_t offset(const Coords& d) const {
    std::ptrdiff_t o = 0;
    for (std::size_t j = 0; j < d.size(); ++j) o += static_cast<std::ptrdiff_t>(d[j]) * static_cast<std::ptrdiff_t>(stride_[j]);
    return o;
  }

  CompositeSpec spec_;
  std::size_t max_power_;
  bool keep_all_;
  Coord radius_ = 0;
  std::size_t side_ = 1;
  std::size_t cells_ = 1;
  std::vector<std::size_t> stride_;
  std::vector<std::vector<Integer>> powers_;
};

/// Unconstrained count by forward propagation of a sparse frontier from u.
/// Independent of StepPowerTable; used as the naive reflection route.
inline CountValue count_unconstrained_sparse(const CompositeSpec& spec, const Coords& u,
                                             const Coords& v, std::size_t n) {
  const auto step = detail::integer_step_distribution(spec);
  const Coord reach_step = static_cast<Coord>(spec.degree());
  std::map<Coords, Integer> frontier{{u, Integer(1)}};
  for (std::size_t t = 0; t < n; ++t) {
    const Coord remaining = static_cast<Coord>(n - t - 1) * reach_step;
    std::map<Coords, Integer> next;
    for (const auto& [x, c] : frontier) {
      for (const auto& [a, w] : step) {
        Coords y = x;
        bool useful = true;
        for (std::size_t j = 0; j < y.size(); ++j) {
          y[j] += a[j];
          if (std::abs(v[j] - y[j]) > remaining) useful = false;
        }
        if (useful) next[y] += c * w;
      }
    }
    frontier = std::move(next);
  }
  auto it = frontier.find(v);
  Integer scaled = it == frontier.end() ? Integer(0) : it->second;
  return ratio(scaled, pow(spec.denominator(), n));
}

/// [z^{v-u}] S(z)^n.
inline CountValue count_unconstrained(const CompositeSpec& spec, const LatticePoint& u,
                                      const LatticePoint& v, std::size_t n,
                                      const CountOptions& opts = {}) {
  detail::check_points(spec, u.coords, v.coords);
  Coords disp(spec.dim());
  const Coord reach = static_cast<Coord>(n * spec.degree());
  for (std::size_t j = 0; j < disp.size(); ++j) {
    disp[j] = v.coords[j] - u.coords[j];
    if (disp[j] > reach || disp[j] < -reach) return 0;
  }
  const auto& w = spec.weights();
  if (spec.kind() == AtomicKind::Diagonal && w.size() == 2 && w[0] == 0) {
    // S = w_1 prod_j (z_j + 1/z_j): product of binomials.
    CountValue out = pow(w[1], static_cast<long>(n));
    for (Coord d : disp) {
      const Coord twice_up = static_cast<Coord>(n) + d;
      if (twice_up % 2 != 0) return 0;
      out *= binomial(static_cast<long>(n), static_cast<long>(twice_up / 2));
    }
    return out;
  }
  StepPowerTable table(spec, n, false, opts);
  return table.coefficient(n, disp);
}

/// Confined DP over the chamber lattice points with x_k <= u_k + max_steps*d.
class ConfinedWalker {
 public:
  ConfinedWalker(const CompositeSpec& spec, const ChamberPoint& start, std::size_t max_steps,
                 const CountOptions& opts = {})
      : spec_(spec), start_(start), max_steps_(max_steps), threads_(detail::resolve_threads(opts.threads)) {
    require_admissible(spec, start);
    height_ = start.top() + static_cast<Coord>(max_steps * spec.degree());
    const long h = static_cast<long>(height_), k = static_cast<long>(spec.dim());
    Integer predicted = spec.kind() == AtomicKind::Axis
                            ? binomial(h, k)
                            : binomial((h + 1) / 2, k) + binomial(h / 2, k);
    if (predicted > Integer(static_cast<unsigned long>(opts.state_budget)))
      throw ResourceError("chamber state space of " + predicted.get_str() +
                          " points exceeds the budget of " + std::to_string(opts.state_budget));
    enumerate_states();
    build_predecessors();
    mass_.assign(states_.size(), Integer(0));
    mass_[index_.at(start.coords())] = 1;
  }

  std::size_t steps_taken() const { return steps_; }
  std::size_t state_count() const { return states_.size(); }

  /// Advances the frontier by one composite step.
  void step() {
    if (steps_ >= max_steps_) throw DomainError("walker advanced past its step allowance");
    const auto& w = spec_.integer_weights();
    std::vector<Integer> acc(states_.size());
    if (w[0] != 0)
      for (std::size_t i = 0; i < states_.size(); ++i) acc[i] = mass_[i] * w[0];
    std::vector<Integer> cur = mass_, next(states_.size());
    for (std::size_t m = 1; m < w.size(); ++m) {
      apply_atomic(cur, next);
      std::swap(cur, next);
      if (w[m] == 0) continue;
      detail::parallel_chunks(states_.size(), threads_, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
          mpz_addmul(acc[i].get_mpz_t(), cur[i].get_mpz_t(), w[m].get_mpz_t());
      });
    }
    mass_ = std::move(acc);
    ++steps_;
  }

  void advance_to(std::size_t n) {
    if (n < steps_) throw DomainError("walker cannot move backwards");
    while (steps_ < n) step();
  }

  CountValue mass_at(const ChamberPoint& v) const {
    if (v.dim() != spec_.dim()) throw DomainError("dimension mismatch");
    auto it = index_.find(v.coords());
    if (it == index_.end()) return 0;
    return ratio(mass_[it->second], pow(spec_.denominator(), steps_));
  }

  CountValue total_mass() const {
    Integer sum = 0;
    for (const auto& m : mass_) sum += m;
    return ratio(sum, pow(spec_.denominator(), steps_));
  }

  /// Nonzero entries of the current frontier.
  FrontierDistribution frontier() const {
    FrontierDistribution out;
    const Integer scale = pow(spec_.denominator(), steps_);
    for (std::size_t i = 0; i < states_.size(); ++i)
      if (mass_[i] != 0) out.emplace(ChamberPoint(states_[i]), ratio(mass_[i], scale));
    return out;
  }

  Coord height() const { return height_; }

 private:
  void enumerate_states() {
    const std::size_t k = spec_.dim();
    Coords cur(k);
    const bool diagonal = spec_.kind() == AtomicKind::Diagonal;
    std::function<void(std::size_t, Coord)> rec = [&](std::size_t j, Coord low) {
      if (j == k) {
        index_.emplace(cur, states_.size());
        states_.push_back(cur);
        return;
      }
      const Coord stride = diagonal && j > 0 ? 2 : 1;  // x_1 takes either parity
      for (Coord x = low; x <= height_; x += stride) {
        cur[j] = x;
        rec(j + 1, x + (diagonal ? 2 : 1));
      }
    };
    rec(0, 1);
  }

  void build_predecessors() {
    const auto steps = spec_.atomic_steps();
    pred_offsets_.assign(1, 0);
    for (const auto& y : states_) {
      for (const auto& a : steps) {
        Coords x = y;
        for (std::size_t j = 0; j < x.size(); ++j) x[j] -= a[j];
        if (!in_chamber(x) || x.back() > height_) continue;
        pred_.push_back(static_cast<std::uint32_t>(index_.at(x)));
      }
      pred_offsets_.push_back(pred_.size());
    }
  }

  void apply_atomic(const std::vector<Integer>& in, std::vector<Integer>& out) const {
    detail::parallel_chunks(states_.size(), threads_, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        mpz_set_ui(out[i].get_mpz_t(), 0);
        for (std::size_t p = pred_offsets_[i]; p < pred_offsets_[i + 1]; ++p)
          mpz_add(out[i].get_mpz_t(), out[i].get_mpz_t(), in[pred_[p]].get_mpz_t());
      }
    });
  }

  CompositeSpec spec_;
  ChamberPoint start_;
  std::size_t max_steps_;
  unsigned threads_;
  Coord height_ = 0;
  std::size_t steps_ = 0;
  std::vector<Coords> states_;
  std::unordered_map<Coords, std::size_t, detail::CoordsHash> index_;
  std::vector<std::size_t> pred_offsets_;
  std::vector<std::uint32_t> pred_;
  std::vector<Integer> mass_;
};

inline CountValue count_confined(const CompositeSpec& spec, const ChamberPoint& u,
                                 const ChamberPoint& v, std::size_t n, const CountOptions& opts = {}) {
  require_admissible(spec, u);
  require_admissible(spec, v);
  ConfinedWalker walker(spec, u, n, opts);
  walker.advance_to(n);
  return walker.mass_at(v);
}

inline CountValue count_confined_free(const CompositeSpec& spec, const ChamberPoint& u, std::size_t n,
                                      const CountOptions& opts = {}) {
  ConfinedWalker walker(spec, u, n, opts);
  walker.advance_to(n);
  return walker.total_mass();
}

/// Confined counts for every length 0..n_max (fixed end point v, or the free
/// end point total when v is empty) from a single DP sweep.
inline std::vector<CountValue> confined_series(const CompositeSpec& spec, const ChamberPoint& u,
                                               const std::optional<ChamberPoint>& v, std::size_t n_max,
                                               const CountOptions& opts = {}) {
  if (v) require_admissible(spec, *v);
  ConfinedWalker walker(spec, u, n_max, opts);
  std::vector<CountValue> out;
  out.reserve(n_max + 1);
  for (std::size_t t = 0;; ++t) {
    out.push_back(v ? walker.mass_at(*v) : walker.total_mass());
    if (t == n_max) break;
    walker.step();
  }
  return out;
}

/// Signed sum over the hyperoctahedral group, read from a prebuilt table;
/// the result is still scaled by L^n.
inline Integer reflection_scaled_sum(const StepPowerTable& table, const ChamberPoint& u,
                                     const ChamberPoint& v, std::size_t n) {
  Integer scaled = 0;
  detail::for_each_signed_image(u.coords(), [&](const Coords& image, int sign) {
    Coords disp(image.size());
    for (std::size_t j = 0; j < disp.size(); ++j) disp[j] = v[j] - image[j];
    const Integer c = table.scaled_coefficient(n, disp);
    if (sign > 0)
      scaled += c;
    else
      scaled -= c;
  });
  return scaled;
}

inline CountValue count_reflection(const StepPowerTable& table, const ChamberPoint& u,
                                   const ChamberPoint& v, std::size_t n) {
  return ratio(reflection_scaled_sum(table, u, v, n), pow(table.denominator(), n));
}

inline CountValue count_reflection(const CompositeSpec& spec, const ChamberPoint& u, const ChamberPoint& v,
                                   std::size_t n, ReflectionMode mode = ReflectionMode::Table,
                                   const CountOptions& opts = {}) {
  require_admissible(spec, u);
  require_admissible(spec, v);
  if (mode == ReflectionMode::Naive) {
    CountValue acc = 0;
    detail::for_each_signed_image(u.coords(), [&](const Coords& image, int sign) {
      CountValue c = count_unconstrained_sparse(spec, image, v.coords(), n);
      acc += sign > 0 ? c : CountValue(-c);
    });
    return acc;
  }
  StepPowerTable table(spec, n, false, opts);
  return count_reflection(table, u, v, n);
}

/// Chamber lattice points of the spec (both parity classes for diagonal
/// steps) with top coordinate at most `height`.
inline std::vector<ChamberPoint> chamber_points_up_to(const CompositeSpec& spec, Coord height) {
  std::vector<ChamberPoint> out;
  const std::size_t k = spec.dim();
  const bool diagonal = spec.kind() == AtomicKind::Diagonal;
  Coords cur(k);
  std::function<void(std::size_t, Coord)> rec = [&](std::size_t j, Coord low) {
    if (j == k) {
      out.emplace_back(cur);
      return;
    }
    const Coord stride = diagonal && j > 0 ? 2 : 1;  // x_1 takes either parity
    for (Coord x = low; x <= height; x += stride) {
      cur[j] = x;
      rec(j + 1, x + (diagonal ? 2 : 1));
    }
  };
  rec(0, 1);
  return out;
}

/// Free end point total via the reflection route: the signed sum summed over
/// every reachable chamber end point.
inline CountValue count_reflection_free(const StepPowerTable& table, const CompositeSpec& spec,
                                        const ChamberPoint& u, std::size_t n) {
  require_admissible(spec, u);
  Integer scaled = 0;
  const Coord height = u.top() + static_cast<Coord>(n * spec.degree());
  for (const auto& v : chamber_points_up_to(spec, height))
    scaled += reflection_scaled_sum(table, u, v, n);
  return ratio(scaled, pow(spec.denominator(), n));
}

inline CountValue count_reflection_free(const CompositeSpec& spec, const ChamberPoint& u, std::size_t n,
                                        const CountOptions& opts = {}) {
  require_admissible(spec, u);
  StepPowerTable table(spec, n, false, opts);
  return count_reflection_free(table, spec, u, n);
}

}  // namespace chamberwalk
