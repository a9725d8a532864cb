#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "cubelearn/exact.hpp"
#include "test_util.hpp"

using namespace cubelearn;
using Catch::Approx;

TEST_CASE("exact coefficients of named functions") {
  const ProductDistribution uni = ProductDistribution::uniform(3);

  // dictator: all mass on {0}
  BooleanTable dict(8);
  for (std::uint32_t x = 0; x < 8; ++x) dict[x] = (x & 1u) ? 1 : -1;
  CHECK(exact_coefficient(uni, dict, FeatureSubset::from_indices({0})) == Approx(1.0));
  for (std::uint32_t m = 0; m < 8; ++m)
    if (m != 1) CHECK(exact_coefficient(uni, dict, FeatureSubset{m}) == Approx(0.0).margin(1e-12));

  // maj3, against a literal 8-point sum kept in the test
  const BooleanTable maj = test_util::maj3_table();
  const double c0 = test_util::brute_coefficient(uni, maj, FeatureSubset::from_indices({0}));
  CHECK(c0 == Approx(0.5));
  CHECK(exact_coefficient(uni, maj, FeatureSubset::from_indices({0})) == Approx(c0));
  const double c012 = test_util::brute_coefficient(uni, maj, FeatureSubset::from_indices({0, 1, 2}));
  CHECK(c012 == Approx(-0.5));
  CHECK(exact_coefficient(uni, maj, FeatureSubset::from_indices({0, 1, 2})) == Approx(c012));

  // a parity has no degree-1 mass
  BooleanTable par(8);
  for (std::uint32_t x = 0; x < 8; ++x)
    par[x] = (((x & 1u) ? 1 : -1) * (((x >> 1) & 1u) ? 1 : -1)) > 0 ? 1 : -1;
  CHECK(exact_coefficient(uni, par, FeatureSubset::from_indices({0})) == Approx(0.0).margin(1e-12));
}

TEST_CASE("exact coefficients match the literal sum under biased moments") {
  Rng rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    const auto dist = test_util::random_distribution(5, rng);
    const auto f = test_util::random_table(5, rng);
    const FeatureSubset S{static_cast<std::uint32_t>(rng.below(32))};
    CHECK(exact_coefficient(dist, f, S) ==
          Approx(test_util::brute_coefficient(dist, f, S)).margin(1e-12));
  }
}

TEST_CASE("norm1_exact") {
  const ProductDistribution uni = ProductDistribution::uniform(3);
  // |0.5 x0 + 0.5 x1| averages to 0.5 under uniform
  const FourierExpansion proj = project(test_util::maj3_expansion(), FeatureSubset::from_indices({0, 1}));
  CHECK(norm1_exact(uni, proj) == Approx(0.5));
  CHECK(norm1_exact(uni, FourierExpansion(3)) == 0.0);
}

TEST_CASE("dimension caps on enumeration paths") {
  std::vector<double> biases(23, 0.5);
  CHECK_THROWS_AS(ProductDistribution(biases).num_points(), DimensionError);
}

TEST_CASE("point probabilities sum to one") {
  Rng rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const int d = 2 + static_cast<int>(rng.below(7));
    const auto dist = test_util::random_distribution(d, rng);
    double total = 0.0;
    for (std::uint32_t x = 0; x < dist.num_points(); ++x) total += dist.point_prob(x);
    CHECK(total == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("orthonormality of parities under random product distributions") {
  Rng rng(17);
  for (int rep = 0; rep < 5; ++rep) {
    const int d = 3 + static_cast<int>(rng.below(4));  // up to 6 here; acceptance goes to 8
    const auto dist = test_util::random_distribution(d, rng);
    const FeatureMoments m = dist.moments();
    const std::uint32_t pts = dist.num_points();
    std::vector<double> xv(static_cast<std::size_t>(d));

    const auto subsets = enumerate_subsets(d, d);
    for (std::size_t a = 0; a < subsets.size(); ++a) {
      for (std::size_t b = a; b < subsets.size(); ++b) {
        double acc = 0.0;
        for (std::uint32_t x = 0; x < pts; ++x) {
          dist.point_values(x, xv);
          acc += dist.point_prob(x) * parity_eval(m, subsets[a], xv) * parity_eval(m, subsets[b], xv);
        }
        if (a == b)
          CHECK(std::abs(acc - 1.0) <= 1e-10);
        else
          CHECK(std::abs(acc) <= 1e-10);
      }
    }
  }
}

TEST_CASE("orthonormality holds at d = 10 on sampled pairs") {
  Rng rng(18);
  const auto dist = test_util::random_distribution(10, rng);
  const FeatureMoments m = dist.moments();
  std::vector<double> xv(10);
  for (int rep = 0; rep < 200; ++rep) {
    const FeatureSubset S{static_cast<std::uint32_t>(rng.below(1024))};
    FeatureSubset T = S;
    while (T == S) T = FeatureSubset{static_cast<std::uint32_t>(rng.below(1024))};
    double cross = 0.0, self = 0.0;
    for (std::uint32_t x = 0; x < dist.num_points(); ++x) {
      dist.point_values(x, xv);
      const double ps = parity_eval(m, S, xv);
      cross += dist.point_prob(x) * ps * parity_eval(m, T, xv);
      self += dist.point_prob(x) * ps * ps;
    }
    CHECK(std::abs(cross) <= 1e-10);
    CHECK(std::abs(self - 1.0) <= 1e-10);
  }
}

TEST_CASE("Plancherel and Parseval on random Boolean tables") {
  Rng rng(19);
  for (int rep = 0; rep < 8; ++rep) {
    const int d = 3 + static_cast<int>(rng.below(4));
    const auto dist = test_util::random_distribution(d, rng);
    const auto f = test_util::random_table(d, rng);
    const auto g = test_util::random_table(d, rng);
    const FourierExpansion fe = exact_expansion(dist, f, d);
    const FourierExpansion ge = exact_expansion(dist, g, d);

    double efg = 0.0;
    for (std::uint32_t x = 0; x < dist.num_points(); ++x)
      efg += dist.point_prob(x) * static_cast<double>(f[x]) * static_cast<double>(g[x]);
    double dot = 0.0;
    for (const auto& [S, c] : fe.terms) dot += c * ge.coef(S);
    CHECK(efg == Approx(dot).margin(1e-9));

    CHECK(norm2_sq(fe) == Approx(1.0).margin(1e-9));  // Parseval for Boolean f
  }
}

TEST_CASE("norm chain for Boolean projections") {
  Rng rng(29);
  for (int rep = 0; rep < 10; ++rep) {
    const int d = 3 + static_cast<int>(rng.below(3));
    const auto dist = test_util::random_distribution(d, rng);
    const auto f = test_util::random_table(d, rng);
    const FeatureSubset J{static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << d))};
    const FourierExpansion proj = project(exact_expansion(dist, f, d), J);
    const double n2sq = norm2_sq(proj);
    const double n1 = norm1_exact(dist, proj);
    const double n2 = std::sqrt(n2sq);
    CHECK(n2sq <= n1 + 1e-10);
    CHECK(n1 <= n2 + 1e-10);
    CHECK(n2 <= 1.0 + 1e-10);
  }
}

TEST_CASE("Pythagoras identity for projections") {
  Rng rng(37);
  for (int rep = 0; rep < 10; ++rep) {
    const int d = 3 + static_cast<int>(rng.below(3));
    const auto dist = test_util::random_distribution(d, rng);
    const auto f = test_util::random_table(d, rng);
    const FourierExpansion fe = exact_expansion(dist, f, d);
    const FeatureSubset J{static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << d))};

    // random h supported on subsets of J
    FourierExpansion h(d);
    for (FeatureSubset S : submasks_of(J))
      if (rng.bernoulli(0.7)) h.terms[S] = rng.uniform(-1, 1);

    const FourierExpansion projJ = project(fe, J);
    const double lhs = norm2_sq_exact(dist, test_util::subtract(fe, h));
    const double rhs = norm2_sq_exact(dist, fe) - norm2_sq(projJ) +
                       norm2_sq(test_util::subtract(projJ, h));
    CHECK(lhs == Approx(rhs).margin(1e-9));
  }
}
