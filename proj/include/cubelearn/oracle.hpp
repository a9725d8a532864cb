#pragma once

#include <cmath>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cubelearn/distribution.hpp"
#include "cubelearn/error.hpp"
#include "cubelearn/exact.hpp"
#include "cubelearn/expansion.hpp"
#include "cubelearn/predictor.hpp"
#include "cubelearn/subset.hpp"

namespace cubelearn {

// Ground truth by exhaustive enumeration at small d. Everything here is
// exact up to floating-point roundoff and serves as the reference the
// estimators and learners are tested against.

/// Deterministic labels: y = f(x) as a ±1 table indexed by point mask.
struct TableLabel {
  BooleanTable values;
};

/// Stochastic labels: eta(x) = P(Y = +1 | x), one entry per point.
struct ChannelLabel {
  std::vector<double> eta;
};

using LabelModel = std::variant<TableLabel, ChannelLabel>;

class ExactProblem {
 public:
  ExactProblem(ProductDistribution dist, LabelModel label)
      : dist_(std::move(dist)), label_(std::move(label)) {
    dist_.require_enumerable();
    const std::size_t want = std::size_t{1} << dist_.dim();
    if (const auto* t = std::get_if<TableLabel>(&label_)) {
      if (t->values.size() != want) throw ConfigError("ExactProblem: table size != 2^d");
      for (std::int8_t v : t->values)
        if (v != 1 && v != -1) throw ConfigError("ExactProblem: table entries must be ±1");
    } else {
      const auto& c = std::get<ChannelLabel>(label_);
      if (c.eta.size() != want) throw ConfigError("ExactProblem: channel size != 2^d");
      for (double e : c.eta)
        if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("ExactProblem: channel values must be in [0,1]");
    }
  }

  const ProductDistribution& dist() const { return dist_; }
  const LabelModel& label() const { return label_; }
  int dim() const { return dist_.dim(); }
  std::uint32_t num_points() const { return dist_.num_points(); }
  bool deterministic() const { return std::holds_alternative<TableLabel>(label_); }

  /// E[Y | x]: f(x) for tables, 2 eta(x) - 1 for channels.
  double ybar(std::uint32_t x) const {
    if (const auto* t = std::get_if<TableLabel>(&label_)) return static_cast<double>(t->values[x]);
    return 2.0 * std::get<ChannelLabel>(label_).eta[x] - 1.0;
  }

  /// P(Y != g | x) for g in ±1.
  double prob_mismatch(std::uint32_t x, int g) const {
    return 0.5 * (1.0 - static_cast<double>(g) * ybar(x));
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["biases"] = dist_.biases();
    if (const auto* t = std::get_if<TableLabel>(&label_)) {
      std::vector<int> vals(t->values.begin(), t->values.end());
      j["label"] = {{"kind", "table"}, {"values", vals}};
    } else {
      j["label"] = {{"kind", "channel"}, {"values", std::get<ChannelLabel>(label_).eta}};
    }
    return j;
  }

  static ExactProblem from_json(const nlohmann::json& j) {
    ProductDistribution dist(j.at("biases").get<std::vector<double>>());
    const auto& lbl = j.at("label");
    const std::string kind = lbl.at("kind").get<std::string>();
    if (kind == "table") {
      std::vector<int> vals = lbl.at("values").get<std::vector<int>>();
      BooleanTable t(vals.begin(), vals.end());
      return ExactProblem(std::move(dist), TableLabel{std::move(t)});
    }
    if (kind == "channel")
      return ExactProblem(std::move(dist),
                          ChannelLabel{lbl.at("values").get<std::vector<double>>()});
    throw ConfigError("ExactProblem: unknown label kind '" + kind + "'");
  }

 private:
  ProductDistribution dist_;
  LabelModel label_;
};

namespace detail {

// Cell index of x within subset J: bit t of the result is bit j_t of x,
// where j_t are the indices of J in ascending order.
inline std::uint32_t cell_pattern(std::uint32_t x, std::span<const int> j_indices) {
  std::uint32_t c = 0;
  for (std::size_t t = 0; t < j_indices.size(); ++t)
    c |= ((x >> j_indices[t]) & 1u) << t;
  return c;
}

// sum_{x in cell} p(x) ybar(x) for every cell of J. Since f^{subseteq J} is
// the conditional expectation E[Y | x^J] on a product space, these signed
// cell masses determine both norms of the projection.
inline std::vector<double> cell_label_mass(const ExactProblem& problem,
                                           std::span<const int> j_indices) {
  std::vector<double> mass(std::size_t{1} << j_indices.size(), 0.0);
  const std::uint32_t n = problem.num_points();
  for (std::uint32_t x = 0; x < n; ++x)
    mass[cell_pattern(x, j_indices)] += problem.dist().point_prob(x) * problem.ybar(x);
  return mass;
}

inline double cell_prob(const ProductDistribution& dist, std::span<const int> j_indices,
                        std::uint32_t cell) {
  double p = 1.0;
  for (std::size_t t = 0; t < j_indices.size(); ++t)
    p *= ((cell >> t) & 1u) ? dist.bias(j_indices[t]) : 1.0 - dist.bias(j_indices[t]);
  return p;
}

struct ProjectionNorms {
  double norm1;
  double norm2_sq;
};

inline ProjectionNorms projection_norms(const ExactProblem& problem, FeatureSubset J) {
  const auto idx = J.indices();
  const auto mass = cell_label_mass(problem, idx);
  ProjectionNorms out{0.0, 0.0};
  for (std::uint32_t c = 0; c < mass.size(); ++c) {
    out.norm1 += std::abs(mass[c]);
    out.norm2_sq += mass[c] * mass[c] / cell_prob(problem.dist(), idx, c);
  }
  return out;
}

}  // namespace detail

/// Exact projection of the label onto J: coefficients E[Y psi_S(X)] for all
/// S inside J, in the parity basis of the problem's exact moments.
inline FourierExpansion exact_projection(const ExactProblem& problem, FeatureSubset J) {
  const detail::ParityTable pt(problem.dist().moments());
  const std::uint32_t n = problem.num_points();
  FourierExpansion out(problem.dim());
  for (FeatureSubset S : submasks_of(J)) {
    double acc = 0.0;
    for (std::uint32_t x = 0; x < n; ++x)
      acc += problem.dist().point_prob(x) * problem.ybar(x) * pt.parity(S, x);
    out.terms.emplace(S, acc);
  }
  return out;
}

struct PoptResult {
  double popt;
  FeatureSubset argmax_J;
  double norm1;  // the maximizing ||f^{subseteq J}||_1
};

/// Minimum misclassification probability over k-juntas with free choice of
/// the feature subset: 1/2 - 1/2 max_{|J|<=k} ||f^{subseteq J}||_1.
/// Ties break toward the smallest mask.
inline PoptResult exact_popt(const ExactProblem& problem, int k) {
  if (k < 0 || k > problem.dim()) throw ConfigError("exact_popt: k must be in [0,d]");
  PoptResult out{0.0, FeatureSubset{}, -1.0};
  for (FeatureSubset J : enumerate_subsets(problem.dim(), k)) {
    const double n1 = detail::projection_norms(problem, J).norm1;
    if (n1 > out.norm1) {
      out.norm1 = n1;
      out.argmax_J = J;
    }
  }
  out.popt = 0.5 - 0.5 * out.norm1;
  return out;
}

struct SandwichResult {
  double lower;
  double popt;
  double upper;
};

/// Two-norm bounds around popt:
/// (1 - max ||f^J||_2)/2 <= popt <= (1 - max ||f^J||_2^2)/2.
inline SandwichResult sandwich(const ExactProblem& problem, int k) {
  double max_norm2_sq = 0.0;
  for (FeatureSubset J : enumerate_subsets(problem.dim(), k))
    max_norm2_sq = std::max(max_norm2_sq, detail::projection_norms(problem, J).norm2_sq);
  SandwichResult out{};
  out.lower = 0.5 * (1.0 - std::sqrt(max_norm2_sq));
  out.upper = 0.5 * (1.0 - max_norm2_sq);
  out.popt = exact_popt(problem, k).popt;
  return out;
}

struct ErmResult {
  double error;
  FeatureSubset best_J;
  /// Optimal junta on best_J's cells, indexed by cell pattern.
  std::vector<std::int8_t> best_g;
  /// Filled (for k <= 3) by a brute-force scan over all 2^{2^|J|} juntas;
  /// must match `error`.
  std::optional<double> literal_scan_error;
};

/// Direct empirical-risk minimization over every subset of size <= k and
/// every Boolean function on its cells. The optimal g per subset is the sign
/// of the conditional label bias, cell by cell; expected 0-1 loss separates
/// over cells, so no scan over the 2^{2^k} juntas is needed. A literal scan
/// is still run for k <= 3 as an independent check.
inline ErmResult erm_exhaustive(const ExactProblem& problem, int k) {
  if (k < 0 || k > problem.dim()) throw ConfigError("erm_exhaustive: k must be in [0,d]");
  if (k > 4) throw BudgetError("erm_exhaustive: k <= 4 enforced");

  const std::uint32_t n = problem.num_points();
  ErmResult out{};
  bool first = true;

  for (FeatureSubset J : enumerate_subsets(problem.dim(), k)) {
    const auto idx = J.indices();
    const std::size_t cells = std::size_t{1} << idx.size();

    // pos[c] = P(Y=+1, cell c); neg[c] = P(Y=-1, cell c).
    std::vector<double> pos(cells, 0.0), neg(cells, 0.0);
    for (std::uint32_t x = 0; x < n; ++x) {
      const double p = problem.dist().point_prob(x);
      const double yb = problem.ybar(x);
      const std::uint32_t c = detail::cell_pattern(x, idx);
      pos[c] += p * 0.5 * (1.0 + yb);
      neg[c] += p * 0.5 * (1.0 - yb);
    }

    std::vector<std::int8_t> g(cells);
    for (std::size_t c = 0; c < cells; ++c) g[c] = (pos[c] - neg[c] >= 0.0) ? 1 : -1;

    // Evaluate the candidate junta by full enumeration, independently of the
    // cell bookkeeping above.
    double err = 0.0;
    for (std::uint32_t x = 0; x < n; ++x)
      err += problem.dist().point_prob(x) *
             problem.prob_mismatch(x, g[detail::cell_pattern(x, idx)]);

    if (first || err < out.error) {
      out.error = err;
      out.best_J = J;
      out.best_g = g;
      first = false;
    }
  }

  if (k <= 3) {
    double literal_best = 1.0;
    for (FeatureSubset J : enumerate_subsets(problem.dim(), k)) {
      const auto idx = J.indices();
      const std::size_t cells = std::size_t{1} << idx.size();
      std::vector<double> pos(cells, 0.0), neg(cells, 0.0);
      for (std::uint32_t x = 0; x < n; ++x) {
        const double p = problem.dist().point_prob(x);
        const double yb = problem.ybar(x);
        const std::uint32_t c = detail::cell_pattern(x, idx);
        pos[c] += p * 0.5 * (1.0 + yb);
        neg[c] += p * 0.5 * (1.0 - yb);
      }
      const std::uint64_t num_g = std::uint64_t{1} << cells;
      for (std::uint64_t gbits = 0; gbits < num_g; ++gbits) {
        double err = 0.0;
        for (std::size_t c = 0; c < cells; ++c)
          err += ((gbits >> c) & 1u) ? neg[c] : pos[c];
        literal_best = std::min(literal_best, err);
      }
    }
    out.literal_scan_error = literal_best;
  }
  return out;
}

struct ExactErrorResult {
  /// P(Y != g(X)) by direct enumeration.
  double error;
  /// 1/2 - 1/2 <ybar, g>.
  double inner_form;
  /// 1/4 (||ybar - g||_2^2 + 1 - ||ybar||_2^2).
  double norm_form;
};

/// Exact generalization error of a predictor, computed three ways; the
/// routes must agree to 1e-9 or the call fails.
inline ExactErrorResult exact_error(const ExactProblem& problem, const SignPredictor& model) {
  if (model.dim() != problem.dim()) throw ConfigError("exact_error: dimension mismatch");
  const std::uint32_t n = problem.num_points();
  std::vector<double> x(static_cast<std::size_t>(problem.dim()));
  double err = 0.0, inner = 0.0, dist_sq = 0.0, ybar_sq = 0.0;
  for (std::uint32_t m = 0; m < n; ++m) {
    problem.dist().point_values(m, x);
    const int g = model.predict(x);
    const double p = problem.dist().point_prob(m);
    const double yb = problem.ybar(m);
    err += p * problem.prob_mismatch(m, g);
    inner += p * yb * static_cast<double>(g);
    dist_sq += p * (yb - g) * (yb - g);
    ybar_sq += p * yb * yb;
  }
  ExactErrorResult out{};
  out.error = err;
  out.inner_form = 0.5 - 0.5 * inner;
  out.norm_form = 0.25 * (dist_sq + 1.0 - ybar_sq);
  if (std::abs(out.error - out.inner_form) > 1e-9 || std::abs(out.error - out.norm_form) > 1e-9)
    throw Error("exact_error: identity routes disagree beyond 1e-9");
  return out;
}

}  // namespace cubelearn
