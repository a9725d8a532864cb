#pragma once

#include <functional>
#include <json.hpp>
#include <span>
#include <variant>
#include <vector>

#include "cubelearn/dataset.hpp"
#include "cubelearn/error.hpp"
#include "cubelearn/expansion.hpp"
#include "cubelearn/moments.hpp"
#include "cubelearn/polynomial.hpp"

namespace cubelearn {

/// Basis functions for generic least-squares fitting. Each takes a point and
/// returns a real value.
using BasisFunction = std::function<double(std::span<const double>)>;

struct FourierBody {
  FourierExpansion expansion;
  FeatureMoments moments;
};

struct MonomialBody {
  MonomialPolynomial poly;
};

/// A fitted combination of user-supplied basis functions. The functions are
/// kept for prediction; only the coefficients are serializable.
struct BasisBody {
  int dim = 0;
  std::vector<double> coeffs;
  std::vector<BasisFunction> basis;
};

/// A thresholded sign classifier: predicts sign(body(x) - theta), with
/// sign(0) fixed to +1 throughout the library.
class SignPredictor {
 public:
  using Body = std::variant<FourierBody, MonomialBody, BasisBody>;

  SignPredictor(Body body, double theta) : body_(std::move(body)), theta_(theta) {}

  int dim() const {
    if (const auto* f = std::get_if<FourierBody>(&body_)) return f->expansion.dim;
    if (const auto* m = std::get_if<MonomialBody>(&body_)) return m->poly.dim;
    return std::get<BasisBody>(body_).dim;
  }

  double theta() const { return theta_; }
  const Body& body() const { return body_; }

  double raw_value(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim())
      throw ConfigError("SignPredictor: point dimension mismatch");
    if (const auto* f = std::get_if<FourierBody>(&body_))
      return eval_expansion(f->expansion, f->moments, x);
    if (const auto* m = std::get_if<MonomialBody>(&body_)) return m->poly.eval(x);
    const auto& b = std::get<BasisBody>(body_);
    double v = 0.0;
    for (std::size_t t = 0; t < b.coeffs.size(); ++t) v += b.coeffs[t] * b.basis[t](x);
    return v;
  }

  int predict(std::span<const double> x) const {
    return raw_value(x) - theta_ >= 0.0 ? +1 : -1;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["theta"] = theta_;
    if (const auto* f = std::get_if<FourierBody>(&body_)) {
      j["kind"] = "fourier";
      j["expansion"] = cubelearn::to_json(f->expansion);
      j["moments"] = {{"means", f->moments.means()}, {"stds", f->moments.stds()}};
    } else if (const auto* m = std::get_if<MonomialBody>(&body_)) {
      j["kind"] = "monomial";
      j["poly"] = cubelearn::to_json(m->poly);
    } else {
      const auto& b = std::get<BasisBody>(body_);
      j["kind"] = "basis";
      j["dim"] = b.dim;
      j["coeffs"] = b.coeffs;
    }
    return j;
  }

  /// Rebuilds a fourier or monomial predictor. Basis predictors carry only
  /// coefficients in JSON and cannot be revived without their functions.
  static SignPredictor from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const double theta = j.at("theta").get<double>();
    if (kind == "fourier") {
      FeatureMoments moments(j.at("moments").at("means").get<std::vector<double>>(),
                             j.at("moments").at("stds").get<std::vector<double>>());
      return SignPredictor(FourierBody{expansion_from_json(j.at("expansion")), std::move(moments)},
                           theta);
    }
    if (kind == "monomial")
      return SignPredictor(MonomialBody{monomial_from_json(j.at("poly"))}, theta);
    throw ConfigError("SignPredictor::from_json: cannot revive kind '" + kind + "'");
  }

 private:
  Body body_;
  double theta_;
};

/// Fraction of dataset rows the predictor gets wrong.
inline double misclassification(const SignPredictor& model, const LabeledDataset& data) {
  if (model.dim() != data.dim()) throw ConfigError("misclassification: dimension mismatch");
  std::vector<double> x(static_cast<std::size_t>(data.dim()));
  long long wrong = 0;
  for (int i = 0; i < data.n(); ++i) {
    data.copy_row(i, x);
    if (model.predict(x) != data.y(i)) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(data.n());
}

}  // namespace cubelearn
