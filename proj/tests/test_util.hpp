#pragma once

// Shared helpers for the test suites: small hand-built functions and seeded
// generators that stay independent of the library paths they are used to
// check.

#include <cmath>
#include <cstdint>
#include <vector>

#include "cubelearn/dataset.hpp"
#include "cubelearn/distribution.hpp"
#include "cubelearn/exact.hpp"
#include "cubelearn/expansion.hpp"
#include "cubelearn/rng.hpp"

namespace test_util {

using namespace cubelearn;

/// maj3 on the first three coordinates as a table over 2^d points.
inline BooleanTable maj3_table(int d = 3) {
  BooleanTable f(std::size_t{1} << d);
  for (std::uint32_t x = 0; x < f.size(); ++x) {
    int s = 0;
    for (int j = 0; j < 3; ++j) s += ((x >> j) & 1u) ? 1 : -1;
    f[x] = s > 0 ? 1 : -1;
  }
  return f;
}

/// The exact maj3 expansion under the uniform distribution:
/// 0.5 (x0 + x1 + x2) - 0.5 x0 x1 x2.
inline FourierExpansion maj3_expansion() {
  FourierExpansion e(3);
  e.set(FeatureSubset::from_indices({0}), 0.5);
  e.set(FeatureSubset::from_indices({1}), 0.5);
  e.set(FeatureSubset::from_indices({2}), 0.5);
  e.set(FeatureSubset::from_indices({0, 1, 2}), -0.5);
  return e;
}

inline BooleanTable random_table(int d, Rng& rng) {
  BooleanTable f(std::size_t{1} << d);
  for (auto& v : f) v = rng.bernoulli(0.5) ? 1 : -1;
  return f;
}

inline ProductDistribution random_distribution(int d, Rng& rng, double lo = 0.1,
                                               double hi = 0.9) {
  std::vector<double> biases(static_cast<std::size_t>(d));
  for (auto& p : biases) p = rng.uniform(lo, hi);
  return ProductDistribution(std::move(biases));
}

/// Dataset with features drawn by coin flips and labels produced by fn(row).
template <typename LabelFn>
LabeledDataset random_dataset(int n, int d, Rng& rng, LabelFn&& fn) {
  std::vector<std::int8_t> xs;
  xs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  std::vector<std::int8_t> ys;
  ys.reserve(static_cast<std::size_t>(n));
  std::vector<std::int8_t> row(static_cast<std::size_t>(d));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) row[static_cast<std::size_t>(j)] = rng.bernoulli(0.5) ? 1 : -1;
    xs.insert(xs.end(), row.begin(), row.end());
    ys.push_back(static_cast<std::int8_t>(fn(row)));
  }
  return LabeledDataset(n, d, std::move(xs), std::move(ys));
}

/// The full cube as a dataset: one row per point, labels from the table.
inline LabeledDataset full_cube_dataset(int d, const BooleanTable& f) {
  const int n = 1 << d;
  std::vector<std::int8_t> xs;
  xs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  std::vector<std::int8_t> ys;
  for (std::uint32_t x = 0; x < static_cast<std::uint32_t>(n); ++x) {
    for (int j = 0; j < d; ++j) xs.push_back(((x >> j) & 1u) ? 1 : -1);
    ys.push_back(f[x]);
  }
  return LabeledDataset(n, d, std::move(xs), std::move(ys));
}

/// Literal E[f(X) psi_S(X)] with an explicit product inside the loop; kept
/// deliberately separate from the library's parity tables.
inline double brute_coefficient(const ProductDistribution& dist, const BooleanTable& f,
                                FeatureSubset S) {
  const FeatureMoments m = dist.moments();
  double acc = 0.0;
  for (std::uint32_t x = 0; x < (std::uint32_t{1} << dist.dim()); ++x) {
    double psi = 1.0;
    for (int j : S.indices()) {
      const double xv = ((x >> j) & 1u) ? 1.0 : -1.0;
      psi *= (xv - m.mean(j)) / m.std_dev(j);
    }
    acc += dist.point_prob(x) * static_cast<double>(f[x]) * psi;
  }
  return acc;
}

inline FourierExpansion subtract(const FourierExpansion& a, const FourierExpansion& b) {
  FourierExpansion out(a.dim);
  out.terms = a.terms;
  for (const auto& [S, c] : b.terms) out.terms[S] -= c;
  return out;
}

}  // namespace test_util
