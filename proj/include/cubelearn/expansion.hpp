#pragma once

#include <bit>
#include <json.hpp>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cubelearn/error.hpp"
#include "cubelearn/moments.hpp"
#include "cubelearn/subset.hpp"

namespace cubelearn {

/// Evaluates the parity psi_S(x) = prod_{j in S} (x_j - mu_j) / sigma_j.
/// psi of the empty set is identically 1.
inline double parity_eval(const FeatureMoments& moments, FeatureSubset S,
                          std::span<const double> x) {
  double v = 1.0;
  for (std::uint32_t m = S.mask; m != 0; m &= m - 1) {
    const int j = std::countr_zero(m);
    v *= (x[static_cast<std::size_t>(j)] - moments.mean(j)) / moments.std_dev(j);
  }
  return v;
}

/// A sparse expansion f = sum_S f_S psi_S, keyed by subset mask. The map is
/// ordered, so iteration (and serialization) is always in ascending mask
/// order. degree_cap, when set, promises every stored subset has at most
/// that many elements.
struct FourierExpansion {
  int dim = 0;
  std::map<FeatureSubset, double> terms;
  std::optional<int> degree_cap;

  FourierExpansion() = default;
  explicit FourierExpansion(int d, std::optional<int> cap = std::nullopt)
      : dim(d), degree_cap(cap) {}

  void set(FeatureSubset S, double coef) {
    if (degree_cap && S.count() > *degree_cap)
      throw ConfigError("FourierExpansion: subset " + S.to_string() +
                        " exceeds degree cap " + std::to_string(*degree_cap));
    terms[S] = coef;
  }

  double coef(FeatureSubset S) const {
    auto it = terms.find(S);
    return it == terms.end() ? 0.0 : it->second;
  }

  std::size_t size() const { return terms.size(); }
};

/// sum_S f_S psi_S(x).
inline double eval_expansion(const FourierExpansion& expansion, const FeatureMoments& moments,
                             std::span<const double> x) {
  double v = 0.0;
  for (const auto& [S, c] : expansion.terms) v += c * parity_eval(moments, S, x);
  return v;
}

/// Keeps exactly the terms supported inside J; coefficients are unchanged.
inline FourierExpansion project(const FourierExpansion& expansion, FeatureSubset J) {
  FourierExpansion out(expansion.dim, expansion.degree_cap);
  for (const auto& [S, c] : expansion.terms)
    if (S.subset_of(J)) out.terms.emplace(S, c);
  return out;
}

/// Parseval: squared 2-norm of the expansion is the sum of squared coefficients.
inline double norm2_sq(const FourierExpansion& expansion) {
  double s = 0.0;
  for (const auto& [S, c] : expansion.terms) s += c * c;
  return s;
}

// JSON form: {"dim": d, "terms": [{"subset": [j...], "coef": c}, ...]},
// terms sorted by mask.
inline nlohmann::json to_json(const FourierExpansion& expansion) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [S, c] : expansion.terms)
    terms.push_back({{"subset", S.indices()}, {"coef", c}});
  nlohmann::json j = {{"dim", expansion.dim}, {"terms", std::move(terms)}};
  if (expansion.degree_cap) j["degree_cap"] = *expansion.degree_cap;
  return j;
}

inline FourierExpansion expansion_from_json(const nlohmann::json& j) {
  FourierExpansion out(j.at("dim").get<int>());
  if (j.contains("degree_cap")) out.degree_cap = j.at("degree_cap").get<int>();
  for (const auto& t : j.at("terms")) {
    std::vector<int> idx = t.at("subset").get<std::vector<int>>();
    out.set(FeatureSubset::from_indices(idx), t.at("coef").get<double>());
  }
  return out;
}

}  // namespace cubelearn
