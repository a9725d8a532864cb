#pragma once

#include <json.hpp>
#include <map>
#include <span>
#include <vector>

#include "cubelearn/error.hpp"
#include "cubelearn/expansion.hpp"
#include "cubelearn/moments.hpp"
#include "cubelearn/subset.hpp"

namespace cubelearn {

/// A polynomial in the plain monomial basis, restricted to multilinear
/// terms: on ±1 inputs x_j^2 = 1, so any exponent vector reduces to the set
/// of coordinates with odd exponent and a mask captures the full generality
/// of degree-capped polynomials on the cube.
struct MonomialPolynomial {
  int dim = 0;
  int degree = 0;
  std::map<FeatureSubset, double> terms;  // mask {j...} stands for prod x_j

  MonomialPolynomial() = default;
  MonomialPolynomial(int d, int k) : dim(d), degree(k) {}

  void set(FeatureSubset S, double coef) {
    if (S.count() > degree)
      throw ConfigError("MonomialPolynomial: term degree exceeds cap");
    terms[S] = coef;
  }

  double coef(FeatureSubset S) const {
    auto it = terms.find(S);
    return it == terms.end() ? 0.0 : it->second;
  }

  double eval(std::span<const double> x) const {
    double v = 0.0;
    for (const auto& [S, c] : terms) {
      double mono = c;
      for (std::uint32_t m = S.mask; m != 0; m &= m - 1)
        mono *= x[static_cast<std::size_t>(std::countr_zero(m))];
      v += mono;
    }
    return v;
  }
};

/// Rewrites a parity expansion in the monomial basis by expanding each
/// psi_S = prod (x_j - mu_j)/sigma_j over subsets of S:
///   psi_S = (prod_{j in S} 1/sigma_j) * sum_{T subseteq S} (prod_{j in S\T} -mu_j) x^T.
inline MonomialPolynomial parity_to_monomial(const FourierExpansion& expansion,
                                             const FeatureMoments& moments) {
  int max_deg = 0;
  for (const auto& [S, c] : expansion.terms) max_deg = std::max(max_deg, S.count());
  MonomialPolynomial out(expansion.dim, max_deg);
  for (const auto& [S, c] : expansion.terms) {
    double scale = c;
    for (int j : S.indices()) scale /= moments.std_dev(j);
    for_each_submask(S, [&](FeatureSubset T) {
      double w = scale;
      for (std::uint32_t m = S.mask & ~T.mask; m != 0; m &= m - 1)
        w *= -moments.mean(std::countr_zero(m));
      out.terms[T] += w;
    });
  }
  return out;
}

inline nlohmann::json to_json(const MonomialPolynomial& poly) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [S, c] : poly.terms)
    terms.push_back({{"vars", S.indices()}, {"coef", c}});
  return {{"dim", poly.dim}, {"degree", poly.degree}, {"terms", std::move(terms)}};
}

inline MonomialPolynomial monomial_from_json(const nlohmann::json& j) {
  MonomialPolynomial out(j.at("dim").get<int>(), j.at("degree").get<int>());
  for (const auto& t : j.at("terms")) {
    std::vector<int> idx = t.at("vars").get<std::vector<int>>();
    out.set(FeatureSubset::from_indices(idx), t.at("coef").get<double>());
  }
  return out;
}

}  // namespace cubelearn
