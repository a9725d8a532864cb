#pragma once

#include <stdexcept>
#include <string>

namespace cubelearn {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested dimension exceeds a hard cap (mask width or full enumeration).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A feature column is constant, so its parity normalization is undefined.
class DegenerateFeatureError : public Error {
 public:
  DegenerateFeatureError(int feature, const std::string& what)
      : Error(what), feature_(feature) {}
  int feature() const { return feature_; }

 private:
  int feature_;
};

/// A combinatorial budget (basis size, subset count) was exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data (CSV parse failures, inconsistent encodings).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or argument values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cubelearn
