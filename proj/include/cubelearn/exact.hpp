#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "cubelearn/distribution.hpp"
#include "cubelearn/expansion.hpp"
#include "cubelearn/moments.hpp"
#include "cubelearn/subset.hpp"

namespace cubelearn {

// Full-enumeration Fourier operations for explicit product distributions.
// All sums run over cube points in ascending mask order, single accumulator,
// so results are deterministic.

/// A Boolean function as a table of ±1 values indexed by point mask.
using BooleanTable = std::vector<std::int8_t>;

namespace detail {

// Per-feature normalized values z_j(+1), z_j(-1) for fast parity products.
struct ParityTable {
  std::vector<double> z_plus, z_minus;
  explicit ParityTable(const FeatureMoments& m) {
    z_plus.resize(static_cast<std::size_t>(m.dim()));
    z_minus.resize(static_cast<std::size_t>(m.dim()));
    for (int j = 0; j < m.dim(); ++j) {
      z_plus[static_cast<std::size_t>(j)] = (1.0 - m.mean(j)) / m.std_dev(j);
      z_minus[static_cast<std::size_t>(j)] = (-1.0 - m.mean(j)) / m.std_dev(j);
    }
  }
  double parity(FeatureSubset S, std::uint32_t point) const {
    double v = 1.0;
    for (std::uint32_t mm = S.mask; mm != 0; mm &= mm - 1) {
      const int j = std::countr_zero(mm);
      v *= ((point >> j) & 1u) ? z_plus[static_cast<std::size_t>(j)]
                               : z_minus[static_cast<std::size_t>(j)];
    }
    return v;
  }
};

}  // namespace detail

/// E[fn(X)] by enumeration of all 2^d points.
template <typename Fn>
double expectation(const ProductDistribution& dist, Fn&& fn) {
  dist.require_enumerable();
  const std::uint32_t n = dist.num_points();
  double acc = 0.0;
  for (std::uint32_t x = 0; x < n; ++x) acc += dist.point_prob(x) * fn(x);
  return acc;
}

/// Exact Fourier coefficient f_S = E[f(X) psi_S(X)] of a Boolean table.
inline double exact_coefficient(const ProductDistribution& dist, const BooleanTable& f,
                                FeatureSubset S) {
  dist.require_enumerable();
  if (f.size() != dist.num_points())
    throw ConfigError("exact_coefficient: table size does not match 2^d");
  const detail::ParityTable pt(dist.moments());
  const std::uint32_t n = dist.num_points();
  double acc = 0.0;
  for (std::uint32_t x = 0; x < n; ++x)
    acc += dist.point_prob(x) * static_cast<double>(f[x]) * pt.parity(S, x);
  return acc;
}

/// All exact coefficients with |S| <= k, as a sparse expansion.
inline FourierExpansion exact_expansion(const ProductDistribution& dist, const BooleanTable& f,
                                        int k) {
  dist.require_enumerable();
  if (f.size() != dist.num_points())
    throw ConfigError("exact_expansion: table size does not match 2^d");
  const detail::ParityTable pt(dist.moments());
  const std::uint32_t n = dist.num_points();
  FourierExpansion out(dist.dim(), k);
  for (FeatureSubset S : enumerate_subsets(dist.dim(), k)) {
    double acc = 0.0;
    for (std::uint32_t x = 0; x < n; ++x)
      acc += dist.point_prob(x) * static_cast<double>(f[x]) * pt.parity(S, x);
    out.terms.emplace(S, acc);
  }
  return out;
}

/// Exact 1-norm E|g(X)| of an expansion g, by enumeration.
inline double norm1_exact(const ProductDistribution& dist, const FourierExpansion& expansion) {
  dist.require_enumerable();
  const detail::ParityTable pt(dist.moments());
  const std::uint32_t n = dist.num_points();
  double acc = 0.0;
  for (std::uint32_t x = 0; x < n; ++x) {
    double v = 0.0;
    for (const auto& [S, c] : expansion.terms) v += c * pt.parity(S, x);
    acc += dist.point_prob(x) * std::abs(v);
  }
  return acc;
}

/// Exact 2-norm squared E[g(X)^2] by enumeration (cross-check for Parseval).
inline double norm2_sq_exact(const ProductDistribution& dist, const FourierExpansion& expansion) {
  dist.require_enumerable();
  const detail::ParityTable pt(dist.moments());
  const std::uint32_t n = dist.num_points();
  double acc = 0.0;
  for (std::uint32_t x = 0; x < n; ++x) {
    double v = 0.0;
    for (const auto& [S, c] : expansion.terms) v += c * pt.parity(S, x);
    acc += dist.point_prob(x) * v * v;
  }
  return acc;
}

}  // namespace cubelearn
