#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "cubelearn/error.hpp"

namespace cubelearn {

/// Per-feature mean and standard deviation, the normalization constants of
/// the parity basis. Every std must be strictly positive; a zero std means
/// the feature is constant and its parities are undefined.
class FeatureMoments {
 public:
  FeatureMoments(std::vector<double> means, std::vector<double> stds)
      : means_(std::move(means)), stds_(std::move(stds)) {
    if (means_.size() != stds_.size())
      throw ConfigError("FeatureMoments: means/stds size mismatch");
    for (std::size_t j = 0; j < stds_.size(); ++j) {
      if (!(stds_[j] > 0.0))
        throw DegenerateFeatureError(static_cast<int>(j),
                                     "FeatureMoments: std of feature " + std::to_string(j) +
                                         " is not positive");
    }
  }

  /// Moments of ±1 variables with bias p = P(X=+1): mu = 2p-1, sigma = sqrt(1-mu^2).
  static FeatureMoments from_biases(std::span<const double> biases) {
    std::vector<double> means, stds;
    means.reserve(biases.size());
    stds.reserve(biases.size());
    for (std::size_t j = 0; j < biases.size(); ++j) {
      const double p = biases[j];
      if (!(p > 0.0 && p < 1.0))
        throw ConfigError("bias of feature " + std::to_string(j) + " must lie in (0,1)");
      const double mu = 2.0 * p - 1.0;
      means.push_back(mu);
      stds.push_back(std::sqrt(1.0 - mu * mu));
    }
    return FeatureMoments(std::move(means), std::move(stds));
  }

  /// Uniform ±1 moments: mu = 0, sigma = 1.
  static FeatureMoments uniform(int d) {
    return FeatureMoments(std::vector<double>(static_cast<std::size_t>(d), 0.0),
                          std::vector<double>(static_cast<std::size_t>(d), 1.0));
  }

  int dim() const { return static_cast<int>(means_.size()); }
  double mean(int j) const { return means_[static_cast<std::size_t>(j)]; }
  double std_dev(int j) const { return stds_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& stds() const { return stds_; }

 private:
  std::vector<double> means_;
  std::vector<double> stds_;
};

}  // namespace cubelearn
