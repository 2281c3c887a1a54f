#pragma once

// Test oracles that share no code with the library's counting routines:
// exhaustive path enumeration and cofactor-expansion determinants.

#include "chamberwalk/numeric.hpp"
#include "chamberwalk/stepmodel.hpp"

#include <functional>
#include <vector>

namespace brute {

using chamberwalk::Coords;
using chamberwalk::Rational;

inline bool strictly_inside(const Coords& x) {
  long prev = 0;
  for (long c : x) {
    if (c <= prev) return false;
    prev = c;
  }
  return true;
}

/// Weighted number of n-step walks from u to v (or to anywhere when
/// `to_anywhere`), enumerating every composite step as an explicit atomic
/// sequence. With `confined`, every atomic position must be strictly inside
/// the chamber.
inline Rational count_paths(const chamberwalk::CompositeSpec& spec, const Coords& u, const Coords& v, int n,
                            bool confined, bool to_anywhere = false) {
  const auto atoms = spec.atomic_steps();
  const auto& w = spec.weights();
  Rational total = 0;

  std::function<void(Coords&, int, const Rational&)> walk;
  std::function<void(Coords&, int, int, const Rational&)> composite;

  // remaining atomic moves `left` inside the current composite step
  composite = [&](Coords& x, int steps_left, int left, const Rational& weight) {
    if (left == 0) {
      walk(x, steps_left - 1, weight);
      return;
    }
    for (const auto& a : atoms) {
      for (std::size_t j = 0; j < x.size(); ++j) x[j] += a[j];
      if (!confined || strictly_inside(x)) composite(x, steps_left, left - 1, weight);
      for (std::size_t j = 0; j < x.size(); ++j) x[j] -= a[j];
    }
  };

  walk = [&](Coords& x, int steps_left, const Rational& weight) {
    if (steps_left == 0) {
      if (to_anywhere || x == v) total += weight;
      return;
    }
    for (std::size_t m = 0; m < w.size(); ++m)
      if (w[m] != 0) composite(x, steps_left, static_cast<int>(m), weight * w[m]);
  };

  Coords x = u;
  walk(x, n, Rational(1));
  return total;
}

/// Determinant by Laplace expansion along the first row.
inline Rational cofactor_det(const std::vector<std::vector<Rational>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Rational acc = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Rational>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Rational> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(m[r][j]);
      minor.push_back(std::move(row));
    }
    const Rational term = m[0][c] * cofactor_det(minor);
    acc += c % 2 == 0 ? term : Rational(-term);
  }
  return acc;
}

}  // namespace brute
