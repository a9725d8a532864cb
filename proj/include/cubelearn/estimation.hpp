#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cubelearn/dataset.hpp"
#include "cubelearn/error.hpp"
#include "cubelearn/expansion.hpp"
#include "cubelearn/moments.hpp"
#include "cubelearn/subset.hpp"

namespace cubelearn {

/// Empirical moments of ±1 features: mu_j is the column mean and sigma_j
/// uses the ±1 identity sigma = sqrt(1 - mu^2), which is exact on the cube.
/// A constant column makes sigma 0 and is reported as degenerate.
inline FeatureMoments empirical_moments(const LabeledDataset& data) {
  if (data.n() < 2) throw ConfigError("empirical_moments: need n >= 2");
  std::vector<double> means(static_cast<std::size_t>(data.dim()));
  std::vector<double> stds(static_cast<std::size_t>(data.dim()));
  for (int j = 0; j < data.dim(); ++j) {
    long long sum = 0;
    for (int i = 0; i < data.n(); ++i) sum += data.x(i, j);
    if (sum == data.n() || sum == -data.n())
      throw DegenerateFeatureError(
          j, "feature " + std::to_string(j) + " is constant over the sample");
    const double mu = static_cast<double>(sum) / static_cast<double>(data.n());
    means[static_cast<std::size_t>(j)] = mu;
    stds[static_cast<std::size_t>(j)] = std::sqrt(1.0 - mu * mu);
  }
  return FeatureMoments(std::move(means), std::move(stds));
}

namespace detail {

// Subset-product recurrence: psi_S(x) = psi_{S minus lowest bit}(x) * z_lowest.
// Masks must be in ascending order so parents precede children.
struct SubsetDag {
  std::vector<FeatureSubset> masks;
  std::vector<std::size_t> parent;  // index of mask with lowest bit cleared
  std::vector<int> feature;         // lowest bit of the mask

  explicit SubsetDag(std::vector<FeatureSubset> ms) : masks(std::move(ms)) {
    parent.resize(masks.size());
    feature.resize(masks.size());
    for (std::size_t t = 0; t < masks.size(); ++t) {
      if (masks[t].empty()) continue;
      feature[t] = masks[t].lowest();
      const FeatureSubset p{masks[t].mask & (masks[t].mask - 1)};
      const auto it = std::lower_bound(masks.begin(), masks.end(), p);
      parent[t] = static_cast<std::size_t>(it - masks.begin());
    }
  }

  // Fills psi[t] = psi_{masks[t]}(row i) given the normalized row z.
  void eval_row(std::span<const double> z, std::span<double> psi) const {
    for (std::size_t t = 0; t < masks.size(); ++t)
      psi[t] = masks[t].empty() ? 1.0
                                : psi[parent[t]] * z[static_cast<std::size_t>(feature[t])];
  }
};

inline void normalized_row(const LabeledDataset& data, const FeatureMoments& m, int i,
                           std::span<double> z) {
  for (int j = 0; j < data.dim(); ++j)
    z[static_cast<std::size_t>(j)] =
        (static_cast<double>(data.x(i, j)) - m.mean(j)) / m.std_dev(j);
}

// Mean of y * psi_S over the sample for every mask in the dag.
inline std::vector<double> coefficient_means(const LabeledDataset& data,
                                             const FeatureMoments& moments,
                                             const SubsetDag& dag) {
  std::vector<double> acc(dag.masks.size(), 0.0);
  std::vector<double> z(static_cast<std::size_t>(data.dim()));
  std::vector<double> psi(dag.masks.size());
  for (int i = 0; i < data.n(); ++i) {
    normalized_row(data, moments, i, z);
    dag.eval_row(z, psi);
    const double yi = static_cast<double>(data.y(i));
    for (std::size_t t = 0; t < acc.size(); ++t) acc[t] += yi * psi[t];
  }
  const double inv_n = 1.0 / static_cast<double>(data.n());
  for (double& a : acc) a *= inv_n;
  return acc;
}

}  // namespace detail

/// Empirical Fourier coefficients a_S = (1/n) sum_i y(i) psi_S(x(i)) for all
/// |S| <= k, evaluated in the parity basis defined by the given moments.
inline FourierExpansion empirical_coefficients(const LabeledDataset& data,
                                               const FeatureMoments& moments, int k) {
  if (moments.dim() != data.dim())
    throw ConfigError("empirical_coefficients: moments dimension mismatch");
  if (k > data.dim()) throw ConfigError("empirical_coefficients: k > d");
  const detail::SubsetDag dag(enumerate_subsets(data.dim(), k));
  const auto a = detail::coefficient_means(data, moments, dag);
  FourierExpansion out(data.dim(), k);
  for (std::size_t t = 0; t < dag.masks.size(); ++t) out.terms.emplace(dag.masks[t], a[t]);
  return out;
}

/// Leave-one-out projection values: entry i is
///   (n/(n-1)) * sum_{S subseteq J} (a_S - y(i) psi_S(x(i))/n) * psi_S(x(i)),
/// the projection onto J re-estimated without sample i, evaluated at x(i).
inline std::vector<double> loo_projection_values(const LabeledDataset& data,
                                                 const FeatureMoments& moments, FeatureSubset J) {
  if (data.n() < 2) throw ConfigError("loo_projection_values: need n >= 2");
  if (J.count() > 20) throw BudgetError("loo_projection_values: |J| > 20");
  if (moments.dim() != data.dim())
    throw ConfigError("loo_projection_values: moments dimension mismatch");

  const detail::SubsetDag dag(submasks_of(J));
  const auto a = detail::coefficient_means(data, moments, dag);

  const double n = static_cast<double>(data.n());
  const double scale = n / (n - 1.0);
  std::vector<double> out(static_cast<std::size_t>(data.n()));
  std::vector<double> z(static_cast<std::size_t>(data.dim()));
  std::vector<double> psi(dag.masks.size());
  for (int i = 0; i < data.n(); ++i) {
    detail::normalized_row(data, moments, i, z);
    dag.eval_row(z, psi);
    const double yi = static_cast<double>(data.y(i));
    double v = 0.0;
    for (std::size_t t = 0; t < psi.size(); ++t) v += (a[t] - yi * psi[t] / n) * psi[t];
    out[static_cast<std::size_t>(i)] = scale * v;
  }
  return out;
}

/// Full-sample projection estimate evaluated at every sample point:
/// entry i is sum_{S subseteq J} a_S psi_S(x(i)).
inline std::vector<double> plugin_projection_values(const LabeledDataset& data,
                                                    const FeatureMoments& moments,
                                                    FeatureSubset J) {
  const detail::SubsetDag dag(submasks_of(J));
  const auto a = detail::coefficient_means(data, moments, dag);
  std::vector<double> out(static_cast<std::size_t>(data.n()));
  std::vector<double> z(static_cast<std::size_t>(data.dim()));
  std::vector<double> psi(dag.masks.size());
  for (int i = 0; i < data.n(); ++i) {
    detail::normalized_row(data, moments, i, z);
    dag.eval_row(z, psi);
    double v = 0.0;
    for (std::size_t t = 0; t < psi.size(); ++t) v += a[t] * psi[t];
    out[static_cast<std::size_t>(i)] = v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sample-size and concentration formulas.
// ---------------------------------------------------------------------------

/// Samples needed so that every empirical mean is within eps0 of the truth
/// with probability 1-delta0: ceil((2/eps0^2) ln(2d/delta0)).
inline long long moment_sample_size(double epsilon0, double delta0, int d) {
  if (!(epsilon0 > 0.0 && epsilon0 < 1.0)) throw ConfigError("moment_sample_size: epsilon0 must be in (0,1)");
  if (!(delta0 > 0.0 && delta0 < 1.0)) throw ConfigError("moment_sample_size: delta0 must be in (0,1)");
  if (d < 1) throw ConfigError("moment_sample_size: d must be positive");
  const double v = (2.0 / (epsilon0 * epsilon0)) * std::log(2.0 * d / delta0);
  return static_cast<long long>(std::ceil(v));
}

/// Accuracy budget for moment estimation; n0 is derived from the formula above.
struct ConcentrationBudget {
  double epsilon0;
  double delta0;
  long long n0;

  ConcentrationBudget(double eps0, double del0, int d)
      : epsilon0(eps0), delta0(del0), n0(moment_sample_size(eps0, del0, d)) {}
};

/// Worst-case squared sup-norm of a degree-<=k parity: the product of the
/// k largest per-feature factors (1+|mu_j|)/(1-|mu_j|). Factors are capped
/// so a near-degenerate feature reports a large finite value.
inline double parity_sup_bound(const FeatureMoments& moments, int k) {
  if (k < 0 || k > moments.dim()) throw ConfigError("parity_sup_bound: k out of range");
  std::vector<double> factors;
  factors.reserve(static_cast<std::size_t>(moments.dim()));
  for (int j = 0; j < moments.dim(); ++j) {
    const double a = std::min(std::abs(moments.mean(j)), 1.0 - 1e-9);
    factors.push_back((1.0 + a) / (1.0 - a));
  }
  std::sort(factors.begin(), factors.end(), std::greater<double>());
  double c = 1.0;
  for (int m = 0; m < k; ++m) c *= factors[static_cast<std::size_t>(m)];
  return std::min(c, 1e15);
}

/// High-probability deviation of empirical Fourier coefficients at exact
/// moments. max_coef bounds max_S |a_S - f_S|; l2 bounds the 2-norm of the
/// full coefficient error vector over all |S| <= k. Both hold with
/// probability at least 1-delta.
struct DeviationBound {
  double max_coef;
  double l2;
};

inline DeviationBound coefficient_deviation_bound(long long n, int d, int k, double delta,
                                                  double c_k) {
  if (n < 1) throw ConfigError("coefficient_deviation_bound: n must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw ConfigError("coefficient_deviation_bound: delta must be in (0,1)");
  if (k < 1) throw ConfigError("coefficient_deviation_bound: k must be >= 1");
  if (c_k < 1.0) throw ConfigError("coefficient_deviation_bound: c_k must be >= 1");
  double k_minus_1_fact = 1.0;
  for (int m = 2; m < k; ++m) k_minus_1_fact *= m;
  const double dk = std::pow(static_cast<double>(d), k);
  const double log_term = std::log(2.0 * dk / (k_minus_1_fact * delta));
  DeviationBound b{};
  b.max_coef = std::sqrt(2.0 * c_k / static_cast<double>(n) * log_term);
  b.l2 = std::sqrt(2.0 * dk * c_k / (k_minus_1_fact * static_cast<double>(n)) * log_term);
  return b;
}

/// Alternative sample size for the 1-norm score to be eps-accurate across all
/// size-k subsets with probability 1-delta (Azuma route):
/// (32 * 2^{2k} * c_k^2 / eps^2) * ln(C(d,k) / (2 delta)).
/// Exposed alongside coefficient_deviation_bound; callers pick the route.
inline long long score1_concentration_sample_size(double eps, double delta, int d, int k,
                                                  double c_k) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("score1 sample size: eps must be in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("score1 sample size: delta must be in (0,1)");
  double binom = 1.0;
  for (int m = 0; m < k; ++m) binom = binom * static_cast<double>(d - m) / static_cast<double>(m + 1);
  const double log_term = std::log(binom / (2.0 * delta));
  const double v = 32.0 * std::pow(2.0, 2 * k) * c_k * c_k / (eps * eps) * log_term;
  return std::max(1ll, static_cast<long long>(std::ceil(v)));
}

}  // namespace cubelearn
