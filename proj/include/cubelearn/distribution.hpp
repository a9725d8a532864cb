#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cubelearn/error.hpp"
#include "cubelearn/moments.hpp"
#include "cubelearn/subset.hpp"

namespace cubelearn {

/// Hard cap on dimensions where the library enumerates all 2^d cube points.
inline constexpr int kMaxEnumerationDim = 22;

/// Point indexing convention used by every full-enumeration routine: a cube
/// point is a mask m < 2^d with bit j set iff x_j = +1.
inline double point_coordinate(std::uint32_t point, int j) {
  return ((point >> j) & 1u) ? +1.0 : -1.0;
}

/// A product distribution on the cube {-1,+1}^d: features are independent
/// and feature j equals +1 with probability bias(j).
class ProductDistribution {
 public:
  explicit ProductDistribution(std::vector<double> biases) : biases_(std::move(biases)) {
    if (biases_.empty()) throw ConfigError("ProductDistribution: empty bias vector");
    if (biases_.size() > FeatureSubset::kMaxDim)
      throw DimensionError("ProductDistribution: dimension exceeds " +
                           std::to_string(FeatureSubset::kMaxDim));
    for (std::size_t j = 0; j < biases_.size(); ++j)
      if (!(biases_[j] > 0.0 && biases_[j] < 1.0))
        throw ConfigError("ProductDistribution: bias of feature " + std::to_string(j) +
                          " must lie in (0,1)");
  }

  static ProductDistribution uniform(int d) {
    return ProductDistribution(std::vector<double>(static_cast<std::size_t>(d), 0.5));
  }

  int dim() const { return static_cast<int>(biases_.size()); }
  double bias(int j) const { return biases_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& biases() const { return biases_; }

  FeatureMoments moments() const { return FeatureMoments::from_biases(biases_); }

  /// Probability of a single cube point m (bit j <=> x_j = +1).
  double point_prob(std::uint32_t point) const {
    double p = 1.0;
    for (int j = 0; j < dim(); ++j)
      p *= ((point >> j) & 1u) ? biases_[static_cast<std::size_t>(j)]
                               : 1.0 - biases_[static_cast<std::size_t>(j)];
    return p;
  }

  /// Number of cube points; only valid in enumeration range.
  std::uint32_t num_points() const {
    require_enumerable();
    return std::uint32_t{1} << dim();
  }

  void require_enumerable() const {
    if (dim() > kMaxEnumerationDim)
      throw DimensionError("full enumeration requires d <= " +
                           std::to_string(kMaxEnumerationDim) + ", got d = " +
                           std::to_string(dim()));
  }

  /// Fills out[j] with the ±1 coordinates of point m.
  void point_values(std::uint32_t point, std::span<double> out) const {
    for (int j = 0; j < dim(); ++j)
      out[static_cast<std::size_t>(j)] = point_coordinate(point, j);
  }

 private:
  std::vector<double> biases_;
};

}  // namespace cubelearn
