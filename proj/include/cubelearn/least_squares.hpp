#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "cubelearn/error.hpp"

namespace cubelearn {

/// Least-squares fit of y ~ X c where row i of X is produced on demand by
/// fill_row(i, row). Small systems are solved by a complete orthogonal
/// decomposition of X, which returns the minimum-norm solution under rank
/// deficiency. Tall systems never materialize X: the Gram matrix is
/// accumulated row by row and stabilized with a 1e-10 ridge before an LDLT
/// solve.
inline std::vector<double> solve_least_squares(
    int n, int m, const std::function<void(int, std::span<double>)>& fill_row,
    std::span<const double> y) {
  if (n < 1 || m < 1) throw ConfigError("solve_least_squares: empty system");
  constexpr long long kDenseEntryLimit = 2'000'000;

  Eigen::VectorXd c;
  if (static_cast<long long>(n) * static_cast<long long>(m) <= kDenseEntryLimit) {
    Eigen::MatrixXd X(n, m);
    std::vector<double> row(static_cast<std::size_t>(m));
    for (int i = 0; i < n; ++i) {
      fill_row(i, row);
      for (int t = 0; t < m; ++t) X(i, t) = row[static_cast<std::size_t>(t)];
    }
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) rhs(i) = y[static_cast<std::size_t>(i)];
    c = X.completeOrthogonalDecomposition().solve(rhs);
  } else {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    std::vector<double> rowbuf(static_cast<std::size_t>(m));
    Eigen::Map<Eigen::VectorXd> r(rowbuf.data(), m);
    for (int i = 0; i < n; ++i) {
      fill_row(i, rowbuf);
      G.selfadjointView<Eigen::Lower>().rankUpdate(r, 1.0);
      b += y[static_cast<std::size_t>(i)] * r;
    }
    G = G.selfadjointView<Eigen::Lower>();
    G.diagonal().array() += 1e-10;
    c = G.ldlt().solve(b);
  }

  return std::vector<double>(c.data(), c.data() + m);
}

/// Mean squared residual (1/n) sum_i (y_i - sum_t c_t X_it)^2.
inline double mean_squared_residual(int n, int m,
                                    const std::function<void(int, std::span<double>)>& fill_row,
                                    std::span<const double> y, std::span<const double> coeffs) {
  std::vector<double> row(static_cast<std::size_t>(m));
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    fill_row(i, row);
    double v = 0.0;
    for (int t = 0; t < m; ++t) v += coeffs[static_cast<std::size_t>(t)] * row[static_cast<std::size_t>(t)];
    const double e = y[static_cast<std::size_t>(i)] - v;
    acc += e * e;
  }
  return acc / static_cast<double>(n);
}

}  // namespace cubelearn
