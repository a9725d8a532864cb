#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cubelearn/error.hpp"

namespace cubelearn {

/// A subset of feature indices 0..d-1, stored as a bit mask.
/// Bit j set means feature j is in the subset. Masks are totally ordered by
/// value; every enumeration in the library lists subsets in ascending mask
/// order so that outputs are reproducible.
struct FeatureSubset {
  static constexpr int kMaxDim = 30;

  std::uint32_t mask = 0;

  constexpr FeatureSubset() = default;
  constexpr explicit FeatureSubset(std::uint32_t m) : mask(m) {}

  static FeatureSubset from_indices(std::span<const int> indices) {
    std::uint32_t m = 0;
    for (int j : indices) {
      if (j < 0 || j >= kMaxDim) throw DimensionError("feature index out of range: " + std::to_string(j));
      m |= (std::uint32_t{1} << j);
    }
    return FeatureSubset{m};
  }
  static FeatureSubset from_indices(std::initializer_list<int> indices) {
    return from_indices(std::span<const int>(indices.begin(), indices.size()));
  }
  static FeatureSubset full(int d) {
    if (d < 0 || d > kMaxDim) throw DimensionError("dimension out of range: " + std::to_string(d));
    return FeatureSubset{d == 0 ? 0u : ((std::uint32_t{1} << d) - 1u)};
  }

  int count() const { return std::popcount(mask); }
  bool empty() const { return mask == 0; }
  bool contains(int j) const { return (mask >> j) & 1u; }
  bool subset_of(FeatureSubset other) const { return (mask & ~other.mask) == 0; }
  FeatureSubset with(int j) const { return FeatureSubset{mask | (std::uint32_t{1} << j)}; }
  FeatureSubset without(int j) const { return FeatureSubset{mask & ~(std::uint32_t{1} << j)}; }
  int lowest() const { return std::countr_zero(mask); }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for (std::uint32_t m = mask; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (int j : indices()) {
      if (!first) os << ',';
      os << j;
      first = false;
    }
    os << '}';
    return os.str();
  }

  auto operator<=>(const FeatureSubset&) const = default;
};

/// Calls fn(sub) for every submask of J in ascending mask order, starting
/// with the empty set and ending with J itself.
template <typename Fn>
void for_each_submask(FeatureSubset J, Fn&& fn) {
  std::uint32_t s = 0;
  while (true) {
    fn(FeatureSubset{s});
    if (s == J.mask) break;
    s = (s - J.mask) & J.mask;
  }
}

inline std::vector<FeatureSubset> submasks_of(FeatureSubset J) {
  std::vector<FeatureSubset> out;
  out.reserve(std::size_t{1} << J.count());
  for_each_submask(J, [&](FeatureSubset s) { out.push_back(s); });
  return out;
}

/// All subsets of [d] with at most k elements, in ascending mask order.
/// The empty set is always first, count is sum_{m<=k} C(d,m).
inline std::vector<FeatureSubset> enumerate_subsets(int d, int k) {
  if (d < 0 || d > FeatureSubset::kMaxDim)
    throw DimensionError("enumerate_subsets: d must be in [0," + std::to_string(FeatureSubset::kMaxDim) +
                         "], got " + std::to_string(d));
  if (k < 0 || k > d) throw ConfigError("enumerate_subsets: k must be in [0,d]");

  // Count first so oversized requests fail before allocating.
  std::uint64_t total = 0;
  {
    std::uint64_t binom = 1;  // C(d,0)
    for (int m = 0; m <= k; ++m) {
      total += binom;
      binom = binom * static_cast<std::uint64_t>(d - m) / static_cast<std::uint64_t>(m + 1);
    }
  }
  constexpr std::uint64_t kMaxSubsets = std::uint64_t{1} << 24;
  if (total > kMaxSubsets)
    throw BudgetError("enumerate_subsets: " + std::to_string(total) + " subsets exceeds budget");

  std::vector<FeatureSubset> out;
  out.reserve(static_cast<std::size_t>(total));
  if (d <= 24) {
    const std::uint32_t end = std::uint32_t{1} << d;
    for (std::uint32_t m = 0; m < end; ++m)
      if (std::popcount(m) <= k) out.push_back(FeatureSubset{m});
  } else {
    // Gosper's hack per cardinality, then sort into ascending mask order.
    out.push_back(FeatureSubset{0});
    const std::uint32_t limit = std::uint32_t{1} << d;
    for (int m = 1; m <= k; ++m) {
      std::uint32_t v = (std::uint32_t{1} << m) - 1u;
      while (v < limit) {
        out.push_back(FeatureSubset{v});
        std::uint32_t c = v & (~v + 1u);
        std::uint32_t r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
      }
    }
    std::sort(out.begin(), out.end());
  }
  return out;
}

/// All subsets of [d] with exactly k elements, ascending mask order.
inline std::vector<FeatureSubset> enumerate_subsets_exact(int d, int k) {
  auto all = enumerate_subsets(d, k);
  std::vector<FeatureSubset> out;
  for (FeatureSubset s : all)
    if (s.count() == k) out.push_back(s);
  return out;
}

}  // namespace cubelearn
