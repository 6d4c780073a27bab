#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "busyq/error.hpp"
#include "busyq/model.hpp"
#include "busyq/rational.hpp"

namespace testutil {

using busyq::Model;
using busyq::Rational;

/// Deterministic model with a strictly decreasing rational rate sequence
/// ending in zero: n-1 distinct numerators over a common denominator.
inline Model random_model(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 0x243f6a8885a308d3ull);
  std::uniform_int_distribution<int> den_pick(1, 8);
  std::uniform_int_distribution<int> num_pick(1, 6 * n + 2);
  std::set<int> values;
  while (static_cast<int>(values.size()) < n - 1) values.insert(num_pick(rng));
  const int d = den_pick(rng);
  std::vector<Rational> seq;
  for (auto it = values.rbegin(); it != values.rend(); ++it) seq.push_back(Rational(*it, d));
  seq.push_back(Rational(0));
  std::uniform_int_distribution<int> mu_num(1, 9);
  Rational mu(mu_num(rng), den_pick(rng));
  return Model::from_sequence(std::move(seq), mu);
}

/// Exact coefficients of the degree n-1 polynomial through n point
/// evaluations, by Gaussian elimination on the Vandermonde system.
inline std::vector<Rational> coeffs_from_evals(const std::vector<Rational>& points,
                                               const std::vector<Rational>& values) {
  const int n = static_cast<int>(points.size());
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1, Rational(0)));
  for (int r = 0; r < n; ++r) {
    Rational p(1);
    for (int c = 0; c < n; ++c) {
      m[r][c] = p;
      p *= points[r];
    }
    m[r][n] = values[r];
  }
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (pivot < n && m[pivot][col].is_zero()) ++pivot;
    if (pivot == n) throw busyq::Error(busyq::ErrorKind::SingularMatrix, "vandermonde");
    std::swap(m[col], m[pivot]);
    for (int r = col + 1; r < n; ++r) {
      if (m[r][col].is_zero()) continue;
      Rational factor = m[r][col] / m[col][col];
      for (int c = col; c <= n; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  std::vector<Rational> coeffs(n, Rational(0));
  for (int r = n - 1; r >= 0; --r) {
    Rational acc = m[r][n];
    for (int c = r + 1; c < n; ++c) acc -= m[r][c] * coeffs[c];
    coeffs[r] = acc / m[r][r];
  }
  return coeffs;
}

}  // namespace testutil
