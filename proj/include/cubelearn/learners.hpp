#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "cubelearn/dataset.hpp"
#include "cubelearn/error.hpp"
#include "cubelearn/estimation.hpp"
#include "cubelearn/least_squares.hpp"
#include "cubelearn/polynomial.hpp"
#include "cubelearn/predictor.hpp"

namespace cubelearn {

/// Picks the threshold minimizing the empirical 0-1 error of
/// sign(value - theta) over the candidate set {-1} U {midpoints of
/// consecutive sorted distinct values, clamped to [-1,1]} U {1}. The
/// empirical error is piecewise constant in theta with breakpoints at the
/// values, so the midpoints attain the exact minimum; ties go to the
/// smallest theta.
inline double select_threshold(std::span<const double> values, std::span<const std::int8_t> labels) {
  const std::size_t n = values.size();
  if (n == 0 || labels.size() != n) throw ConfigError("select_threshold: need n >= 1 matching labels");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  // prefix_pos[r] = #{i < r in sorted order : label +1}
  std::vector<long long> prefix_pos(n + 1, 0);
  long long total_pos = 0;
  for (std::size_t r = 0; r < n; ++r) {
    prefix_pos[r + 1] = prefix_pos[r] + (labels[order[r]] == 1 ? 1 : 0);
    total_pos += (labels[order[r]] == 1 ? 1 : 0);
  }
  const long long total_neg = static_cast<long long>(n) - total_pos;

  std::vector<double> sorted_distinct;
  sorted_distinct.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double v = values[order[r]];
    if (sorted_distinct.empty() || v != sorted_distinct.back()) sorted_distinct.push_back(v);
  }

  std::vector<double> candidates;
  candidates.push_back(-1.0);
  for (std::size_t t = 0; t + 1 < sorted_distinct.size(); ++t)
    candidates.push_back(std::clamp(0.5 * (sorted_distinct[t] + sorted_distinct[t + 1]), -1.0, 1.0));
  candidates.push_back(1.0);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // error(theta) = #{v_i >= theta, y=-1} + #{v_i < theta, y=+1}; prediction
  // at v = theta is +1 because sign(0) = +1.
  auto error_at = [&](double theta) {
    const auto it = std::lower_bound(
        order.begin(), order.end(), theta,
        [&](std::size_t idx, double th) { return values[idx] < th; });
    const std::size_t r = static_cast<std::size_t>(it - order.begin());
    const long long pos_below = prefix_pos[r];
    const long long neg_at_or_above = total_neg - (static_cast<long long>(r) - pos_below);
    return pos_below + neg_at_or_above;
  };

  double best_theta = candidates.front();
  long long best_err = error_at(best_theta);
  for (std::size_t t = 1; t < candidates.size(); ++t) {
    const long long e = error_at(candidates[t]);
    if (e < best_err) {
      best_err = e;
      best_theta = candidates[t];
    }
  }
  return best_theta;
}

struct FourierFitOptions {
  /// When set, the first ceil(fraction*n) rows estimate the moments and the
  /// remaining rows estimate the coefficients. Default reuses all rows for
  /// both.
  std::optional<double> moment_split_fraction;
  /// When true, runs threshold selection on the fitted values instead of
  /// keeping theta = 0.
  bool tune_theta = false;
};

/// Degree-k empirical Fourier fit: estimate moments, estimate all
/// coefficients a_S with |S| <= k, predict with sign of the expansion.
inline SignPredictor fit_fourier(const LabeledDataset& data, int k, FourierFitOptions opts = {}) {
  const LabeledDataset* coef_data = &data;
  std::optional<LabeledDataset> moment_part, coef_part;
  if (opts.moment_split_fraction) {
    const double f = *opts.moment_split_fraction;
    if (!(f > 0.0 && f < 1.0)) throw ConfigError("fit_fourier: split fraction must be in (0,1)");
    const int m = static_cast<int>(std::ceil(f * data.n()));
    if (m < 2 || data.n() - m < 1) throw ConfigError("fit_fourier: split leaves too few rows");
    std::vector<int> head(static_cast<std::size_t>(m));
    std::iota(head.begin(), head.end(), 0);
    std::vector<int> tail(static_cast<std::size_t>(data.n() - m));
    std::iota(tail.begin(), tail.end(), m);
    moment_part = data.take(head);
    coef_part = data.take(tail);
    coef_data = &*coef_part;
  }

  FeatureMoments moments =
      opts.moment_split_fraction ? empirical_moments(*moment_part) : empirical_moments(data);
  FourierExpansion expansion = empirical_coefficients(*coef_data, moments, k);

  double theta = 0.0;
  if (opts.tune_theta) {
    std::vector<double> values(static_cast<std::size_t>(coef_data->n()));
    std::vector<double> x(static_cast<std::size_t>(coef_data->dim()));
    for (int i = 0; i < coef_data->n(); ++i) {
      coef_data->copy_row(i, x);
      values[static_cast<std::size_t>(i)] = eval_expansion(expansion, moments, x);
    }
    theta = select_threshold(values, coef_data->labels());
  }
  return SignPredictor(FourierBody{std::move(expansion), std::move(moments)}, theta);
}

/// Degree-k polynomial regression: minimize the empirical square loss over
/// multilinear monomials of degree <= k, then pick the error-minimizing
/// threshold. Minimum-norm on rank deficiency, so n smaller than the basis
/// is allowed.
inline SignPredictor fit_l2_polyreg(const LabeledDataset& data, int k) {
  const auto masks = enumerate_subsets(data.dim(), k);
  if (masks.size() > 1'000'000) throw BudgetError("fit_l2_polyreg: monomial basis too large");
  const detail::SubsetDag dag(masks);
  const int m = static_cast<int>(masks.size());

  std::vector<double> xrow(static_cast<std::size_t>(data.dim()));
  auto fill_row = [&](int i, std::span<double> row) {
    data.copy_row(i, xrow);
    dag.eval_row(xrow, row);
  };
  std::vector<double> y(static_cast<std::size_t>(data.n()));
  for (int i = 0; i < data.n(); ++i) y[static_cast<std::size_t>(i)] = data.y(i);

  const std::vector<double> coeffs = solve_least_squares(data.n(), m, fill_row, y);

  MonomialPolynomial poly(data.dim(), k);
  for (int t = 0; t < m; ++t) poly.terms.emplace(masks[static_cast<std::size_t>(t)],
                                                 coeffs[static_cast<std::size_t>(t)]);

  std::vector<double> values(static_cast<std::size_t>(data.n()));
  std::vector<double> row(static_cast<std::size_t>(m));
  for (int i = 0; i < data.n(); ++i) {
    fill_row(i, row);
    double v = 0.0;
    for (int t = 0; t < m; ++t) v += coeffs[static_cast<std::size_t>(t)] * row[static_cast<std::size_t>(t)];
    values[static_cast<std::size_t>(i)] = v;
  }
  const double theta = select_threshold(values, data.labels());
  return SignPredictor(MonomialBody{std::move(poly)}, theta);
}

/// Least-squares fit over an arbitrary finite set of basis functions;
/// predicts with the plain sign of the fitted combination (theta = 0).
inline SignPredictor fit_generic_basis(const LabeledDataset& data,
                                       std::vector<BasisFunction> basis) {
  if (basis.empty()) throw ConfigError("fit_generic_basis: empty basis");
  if (basis.size() > 100'000) throw BudgetError("fit_generic_basis: basis too large");
  const int m = static_cast<int>(basis.size());

  std::vector<double> xrow(static_cast<std::size_t>(data.dim()));
  auto fill_row = [&](int i, std::span<double> row) {
    data.copy_row(i, xrow);
    for (int t = 0; t < m; ++t) row[static_cast<std::size_t>(t)] = basis[static_cast<std::size_t>(t)](xrow);
  };
  std::vector<double> y(static_cast<std::size_t>(data.n()));
  for (int i = 0; i < data.n(); ++i) y[static_cast<std::size_t>(i)] = data.y(i);

  std::vector<double> coeffs = solve_least_squares(data.n(), m, fill_row, y);
  return SignPredictor(BasisBody{data.dim(), std::move(coeffs), std::move(basis)}, 0.0);
}

/// The slack-transfer polynomial U(x) = x^3 + (3/2) x^2 + (5/4) x, x >= 0.
/// Satisfies U(x) <= 4x on [0,1].
inline double bound_U(double x) {
  if (x < 0.0) throw ConfigError("bound_U: argument must be nonnegative");
  return x * x * x + 1.5 * x * x + 1.25 * x;
}

}  // namespace cubelearn
