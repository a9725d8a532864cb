#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cubelearn/error.hpp"

namespace cubelearn {

/// n samples of d ±1-valued features with ±1 labels. Row-major, immutable
/// after construction; every entry is validated to be exactly -1 or +1.
class LabeledDataset {
 public:
  LabeledDataset(int n, int d, std::vector<std::int8_t> features, std::vector<std::int8_t> labels)
      : n_(n), d_(d), x_(std::move(features)), y_(std::move(labels)) {
    if (n_ < 1 || d_ < 1) throw DataError("LabeledDataset: need n >= 1 and d >= 1");
    if (x_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(d_))
      throw DataError("LabeledDataset: feature buffer size mismatch");
    if (y_.size() != static_cast<std::size_t>(n_))
      throw DataError("LabeledDataset: label buffer size mismatch");
    for (std::int8_t v : x_)
      if (v != 1 && v != -1) throw DataError("LabeledDataset: feature entry not in {-1,+1}");
    for (std::int8_t v : y_)
      if (v != 1 && v != -1) throw DataError("LabeledDataset: label not in {-1,+1}");
  }

  int n() const { return n_; }
  int dim() const { return d_; }

  std::int8_t x(int i, int j) const {
    return x_[static_cast<std::size_t>(i) * static_cast<std::size_t>(d_) +
              static_cast<std::size_t>(j)];
  }
  std::int8_t y(int i) const { return y_[static_cast<std::size_t>(i)]; }

  std::span<const std::int8_t> row(int i) const {
    return {x_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(d_),
            static_cast<std::size_t>(d_)};
  }

  void copy_row(int i, std::span<double> out) const {
    auto r = row(i);
    for (int j = 0; j < d_; ++j)
      out[static_cast<std::size_t>(j)] = static_cast<double>(r[static_cast<std::size_t>(j)]);
  }

  const std::vector<std::int8_t>& features() const { return x_; }
  const std::vector<std::int8_t>& labels() const { return y_; }

  /// New dataset from a subset of row indices (in the given order).
  LabeledDataset take(std::span<const int> rows) const {
    std::vector<std::int8_t> fx;
    std::vector<std::int8_t> fy;
    fx.reserve(rows.size() * static_cast<std::size_t>(d_));
    fy.reserve(rows.size());
    for (int i : rows) {
      auto r = row(i);
      fx.insert(fx.end(), r.begin(), r.end());
      fy.push_back(y(i));
    }
    return LabeledDataset(static_cast<int>(rows.size()), d_, std::move(fx), std::move(fy));
  }

 private:
  int n_;
  int d_;
  std::vector<std::int8_t> x_;
  std::vector<std::int8_t> y_;
};

}  // namespace cubelearn
