#pragma once

#include <cmath>
#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubelearn/dataset.hpp"
#include "cubelearn/error.hpp"
#include "cubelearn/estimation.hpp"
#include "cubelearn/expansion.hpp"
#include "cubelearn/predictor.hpp"

namespace cubelearn {

enum class ScoreMethod { kScore1, kScore2 };
enum class SearchStrategy { kExhaustive, kGreedy };

inline const char* to_string(ScoreMethod m) { return m == ScoreMethod::kScore1 ? "score1" : "score2"; }
inline const char* to_string(SearchStrategy s) {
  return s == SearchStrategy::kExhaustive ? "exhaustive" : "greedy";
}

/// Shared state for scoring many subsets of one dataset: the normalized
/// feature matrix z_ij = (x_ij - mu_j)/sigma_j is computed once.
class FeatureScorer {
 public:
  FeatureScorer(const LabeledDataset& data, const FeatureMoments& moments)
      : data_(data), moments_(moments), z_(static_cast<std::size_t>(data.n()) *
                                           static_cast<std::size_t>(data.dim())) {
    if (moments.dim() != data.dim()) throw ConfigError("FeatureScorer: moments dimension mismatch");
    for (int i = 0; i < data.n(); ++i)
      detail::normalized_row(data, moments, i,
                             std::span<double>(z_.data() + static_cast<std::size_t>(i) * data.dim(),
                                               static_cast<std::size_t>(data.dim())));
  }

  const FeatureMoments& moments() const { return moments_; }

  /// Empirical coefficients a_S for all S inside J, in ascending mask order.
  std::vector<double> coefficients(const detail::SubsetDag& dag) const {
    std::vector<double> acc(dag.masks.size(), 0.0);
    std::vector<double> psi(dag.masks.size());
    for (int i = 0; i < data_.n(); ++i) {
      dag.eval_row(z_row(i), psi);
      const double yi = static_cast<double>(data_.y(i));
      for (std::size_t t = 0; t < acc.size(); ++t) acc[t] += yi * psi[t];
    }
    const double inv_n = 1.0 / static_cast<double>(data_.n());
    for (double& a : acc) a *= inv_n;
    return acc;
  }

  /// score2(J) = sum_{S subseteq J} a_S^2, the empirical squared 2-norm of
  /// the projection onto J.
  double score2(FeatureSubset J) const {
    check_budget(J);
    const detail::SubsetDag dag(submasks_of(J));
    double s = 0.0;
    for (double a : coefficients(dag)) s += a * a;
    return s;
  }

  /// score1(J): mean absolute leave-one-out projection value. The naive
  /// variant instead averages |f_hat^{subseteq J}(x_i)| with sample i left in.
  double score1(FeatureSubset J, bool naive = false) const {
    check_budget(J);
    if (data_.n() < 2) throw ConfigError("score1: need n >= 2");
    const detail::SubsetDag dag(submasks_of(J));
    const std::vector<double> a = coefficients(dag);
    const double n = static_cast<double>(data_.n());
    const double scale = n / (n - 1.0);
    std::vector<double> psi(dag.masks.size());
    double acc = 0.0;
    for (int i = 0; i < data_.n(); ++i) {
      dag.eval_row(z_row(i), psi);
      const double yi = static_cast<double>(data_.y(i));
      double v = 0.0;
      if (naive) {
        for (std::size_t t = 0; t < psi.size(); ++t) v += a[t] * psi[t];
      } else {
        for (std::size_t t = 0; t < psi.size(); ++t) v += (a[t] - yi * psi[t] / n) * psi[t];
        v *= scale;
      }
      acc += std::abs(v);
    }
    return acc / n;
  }

  double score(ScoreMethod method, FeatureSubset J, bool naive_score1) const {
    return method == ScoreMethod::kScore1 ? score1(J, naive_score1) : score2(J);
  }

  /// Predictor body for a chosen subset: the empirical projection
  /// f_hat^{subseteq J} = sum_{S subseteq J} a_S psi_S.
  FourierExpansion projection_expansion(FeatureSubset J) const {
    const detail::SubsetDag dag(submasks_of(J));
    const std::vector<double> a = coefficients(dag);
    FourierExpansion out(data_.dim());
    for (std::size_t t = 0; t < dag.masks.size(); ++t) out.terms.emplace(dag.masks[t], a[t]);
    return out;
  }

 private:
  std::span<const double> z_row(int i) const {
    return {z_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(data_.dim()),
            static_cast<std::size_t>(data_.dim())};
  }
  static void check_budget(FeatureSubset J) {
    if (J.count() > 20) throw BudgetError("subset score: |J| > 20");
  }

  const LabeledDataset& data_;
  FeatureMoments moments_;
  std::vector<double> z_;
};

inline double score1(const LabeledDataset& data, const FeatureMoments& moments, FeatureSubset J,
                     bool naive = false) {
  return FeatureScorer(data, moments).score1(J, naive);
}

inline double score2(const LabeledDataset& data, const FeatureMoments& moments, FeatureSubset J) {
  return FeatureScorer(data, moments).score2(J);
}

struct SelectionReport {
  ScoreMethod method;
  SearchStrategy search;
  int k = 0;
  FeatureSubset chosen;
  double score = 0.0;
  /// Exhaustive search records every evaluated size-k subset with its score;
  /// greedy records the winning subset of each round.
  std::vector<std::pair<FeatureSubset, double>> all_scores;
  SignPredictor predictor;

  nlohmann::json to_json() const {
    nlohmann::json scores = nlohmann::json::array();
    for (const auto& [J, s] : all_scores)
      scores.push_back({{"subset", J.indices()}, {"score", s}});
    return {{"method", cubelearn::to_string(method)},
            {"search", cubelearn::to_string(search)},
            {"k", k},
            {"chosen", chosen.indices()},
            {"score", score},
            {"all_scores", std::move(scores)},
            {"predictor", predictor.to_json()}};
  }
};

struct SelectOptions {
  bool collect_scores = true;
  bool naive_score1 = false;
};

/// Feature selection with the embedded projection predictor. Exhaustive
/// search scores every size-k subset; greedy grows the subset one feature at
/// a time for k rounds. Ties always break toward the smaller mask.
inline SelectionReport select(const LabeledDataset& data, int k, ScoreMethod method,
                              SearchStrategy search, SelectOptions opts = {}) {
  if (k < 0 || k > data.dim()) throw ConfigError("select: k must be in [0,d]");
  const FeatureMoments moments = empirical_moments(data);
  const FeatureScorer scorer(data, moments);

  FeatureSubset chosen;
  double best = 0.0;
  std::vector<std::pair<FeatureSubset, double>> all_scores;

  if (search == SearchStrategy::kExhaustive) {
    double count = 1.0;
    for (int m = 0; m < k; ++m) count = count * (data.dim() - m) / (m + 1);
    if (count > 1e6) throw BudgetError("select: C(d,k) exceeds exhaustive budget");

    // score2 shares one coefficient table across subsets; score1 is
    // evaluated per subset (the leave-one-out values depend on J globally).
    if (method == ScoreMethod::kScore2) {
      const detail::SubsetDag dag(enumerate_subsets(data.dim(), k));
      const std::vector<double> a = scorer.coefficients(dag);
      std::vector<double> a_sq_by_rank(a.size());
      for (std::size_t t = 0; t < a.size(); ++t) a_sq_by_rank[t] = a[t] * a[t];
      bool first = true;
      for (FeatureSubset J : enumerate_subsets_exact(data.dim(), k)) {
        double s = 0.0;
        for_each_submask(J, [&](FeatureSubset S) {
          const auto it = std::lower_bound(dag.masks.begin(), dag.masks.end(), S);
          s += a_sq_by_rank[static_cast<std::size_t>(it - dag.masks.begin())];
        });
        if (opts.collect_scores) all_scores.emplace_back(J, s);
        if (first || s > best) {
          best = s;
          chosen = J;
          first = false;
        }
      }
    } else {
      bool first = true;
      for (FeatureSubset J : enumerate_subsets_exact(data.dim(), k)) {
        const double s = scorer.score1(J, opts.naive_score1);
        if (opts.collect_scores) all_scores.emplace_back(J, s);
        if (first || s > best) {
          best = s;
          chosen = J;
          first = false;
        }
      }
    }
  } else {
    FeatureSubset current;
    for (int round = 0; round < k; ++round) {
      bool first = true;
      FeatureSubset round_best;
      double round_score = 0.0;
      for (int j = 0; j < data.dim(); ++j) {
        if (current.contains(j)) continue;
        const FeatureSubset cand = current.with(j);
        const double s = scorer.score(method, cand, opts.naive_score1);
        if (first || s > round_score) {
          round_score = s;
          round_best = cand;
          first = false;
        }
      }
      current = round_best;
      best = round_score;
      if (opts.collect_scores) all_scores.emplace_back(current, round_score);
    }
    chosen = current;
    if (k == 0) best = scorer.score(method, chosen, opts.naive_score1);
  }

  SignPredictor predictor(FourierBody{scorer.projection_expansion(chosen), moments}, 0.0);
  return SelectionReport{method, search, k, chosen, best, std::move(all_scores),
                         std::move(predictor)};
}

}  // namespace cubelearn
