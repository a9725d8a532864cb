#include <catch2/catch_amalgamated.hpp>

#include "cubelearn/subset.hpp"

using namespace cubelearn;

TEST_CASE("subset basics") {
  FeatureSubset s = FeatureSubset::from_indices({0, 2, 5});
  CHECK(s.mask == 0b100101u);
  CHECK(s.count() == 3);
  CHECK(s.contains(0));
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(1));
  CHECK(s.indices() == std::vector<int>{0, 2, 5});
  CHECK(s.to_string() == "{0,2,5}");
  CHECK(s.subset_of(FeatureSubset::full(6)));
  CHECK_FALSE(FeatureSubset::full(6).subset_of(s));
  CHECK(FeatureSubset{}.subset_of(s));
  CHECK(s.without(2).indices() == std::vector<int>{0, 5});
}

TEST_CASE("enumerate_subsets counts and order") {
  // full power set of size 2^3
  CHECK(enumerate_subsets(3, 3).size() == 8);
  // only the empty set
  auto only_empty = enumerate_subsets(5, 0);
  REQUIRE(only_empty.size() == 1);
  CHECK(only_empty[0].empty());

  // Independent count for d=20, k=3 via Pascal's triangle.
  long long pascal[21][21] = {};
  for (int n = 0; n <= 20; ++n) {
    pascal[n][0] = 1;
    for (int r = 1; r <= n; ++r) pascal[n][r] = pascal[n - 1][r - 1] + (r <= n - 1 ? pascal[n - 1][r] : 0);
  }
  const long long expected = pascal[20][0] + pascal[20][1] + pascal[20][2] + pascal[20][3];
  CHECK(expected == 1351);
  CHECK(enumerate_subsets(20, 3).size() == static_cast<std::size_t>(expected));

  auto subs = enumerate_subsets(6, 2);
  CHECK(subs.front().empty());
  for (std::size_t t = 1; t < subs.size(); ++t) {
    CHECK(subs[t - 1].mask < subs[t].mask);  // strictly ascending
    CHECK(subs[t].count() <= 2);
  }
}

TEST_CASE("enumerate_subsets above mask width fails") {
  CHECK_THROWS_AS(enumerate_subsets(31, 2), DimensionError);
  CHECK_THROWS_AS(enumerate_subsets(5, 6), ConfigError);
  CHECK_THROWS_AS(enumerate_subsets(25, 25), BudgetError);
}

TEST_CASE("enumerate_subsets wide dimension uses the same order") {
  auto subs = enumerate_subsets(28, 2);
  CHECK(subs.size() == 1u + 28u + 28u * 27u / 2u);
  for (std::size_t t = 1; t < subs.size(); ++t) CHECK(subs[t - 1].mask < subs[t].mask);
}

TEST_CASE("submask enumeration is ascending and complete") {
  const FeatureSubset J = FeatureSubset::from_indices({1, 3, 4});
  auto subs = submasks_of(J);
  REQUIRE(subs.size() == 8);
  CHECK(subs.front().empty());
  CHECK(subs.back() == J);
  for (std::size_t t = 1; t < subs.size(); ++t) {
    CHECK(subs[t - 1].mask < subs[t].mask);
    CHECK(subs[t].subset_of(J));
  }
}

TEST_CASE("enumerate_subsets_exact keeps only one cardinality") {
  auto subs = enumerate_subsets_exact(6, 3);
  CHECK(subs.size() == 20);
  for (auto s : subs) CHECK(s.count() == 3);
}
