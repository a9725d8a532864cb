#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "cubelearn/data_io.hpp"
#include "cubelearn/feature_selection.hpp"
#include "cubelearn/oracle.hpp"
#include "test_util.hpp"

using namespace cubelearn;
using Catch::Approx;

namespace {

LabeledDataset parity_data(int n, int d, std::uint64_t seed, std::initializer_list<int> coords,
                           double noise = 0.0) {
  SyntheticSpec spec;
  spec.d = d;
  spec.n = n;
  spec.rule = ParityRule{FeatureSubset::from_indices(coords)};
  spec.noise_rate = noise;
  spec.seed = seed;
  return generate(spec);
}

}  // namespace

TEST_CASE("score1 on named cases") {
  // constant +1 labels, J = empty: leave-one-out mean of constants
  Rng rng(71);
  const auto ones = test_util::random_dataset(64, 3, rng, [](const auto&) { return 1; });
  CHECK(score1(ones, empirical_moments(ones), FeatureSubset{}) == Approx(1.0));

  // independent balanced labels: score1 of the empty set approaches |E[Y]| = 0
  const auto noise = test_util::random_dataset(10000, 3, rng, [&](const auto&) {
    return rng.bernoulli(0.5) ? 1 : -1;
  });
  CHECK(score1(noise, empirical_moments(noise), FeatureSubset{}) <= 0.05);

  // maj3 at n = 1e5: the full-set score approaches ||f||_1 = 1
  SyntheticSpec spec;
  spec.d = 3;
  spec.n = 100000;
  spec.rule = MajorityRule{FeatureSubset::from_indices({0, 1, 2})};
  spec.seed = 72;
  const auto maj = generate(spec);
  CHECK(score1(maj, empirical_moments(maj), FeatureSubset::from_indices({0, 1, 2})) ==
        Approx(1.0).margin(0.02));
}

TEST_CASE("score2 on named cases") {
  // y = x0 with an exactly balanced column
  const auto dict = test_util::full_cube_dataset(1, BooleanTable{-1, 1});
  CHECK(score2(dict, empirical_moments(dict), FeatureSubset::from_indices({0})) == Approx(1.0));

  // empty set: squared label mean
  Rng rng(73);
  const auto data = test_util::random_dataset(500, 3, rng, [&](const auto&) {
    return rng.bernoulli(0.75) ? 1 : -1;
  });
  double mean = 0;
  for (int i = 0; i < data.n(); ++i) mean += data.y(i);
  mean /= data.n();
  CHECK(score2(data, empirical_moments(data), FeatureSubset{}) == Approx(mean * mean).margin(1e-12));
}

TEST_CASE("score2 is monotone under inclusion, exactly") {
  Rng rng(74);
  const auto data = test_util::random_dataset(300, 5, rng, [&](const auto& row) {
    return rng.bernoulli(0.2) ? -static_cast<int>(row[1]) : static_cast<int>(row[1]);
  });
  const FeatureMoments m = empirical_moments(data);
  const FeatureScorer scorer(data, m);
  for (int rep = 0; rep < 20; ++rep) {
    const FeatureSubset J{static_cast<std::uint32_t>(rng.below(32))};
    const FeatureSubset Jbig{J.mask | static_cast<std::uint32_t>(rng.below(32))};
    CHECK(scorer.score2(J) <= scorer.score2(Jbig) + 1e-15);
  }
}

TEST_CASE("score1 is statistically monotone under inclusion") {
  SyntheticSpec spec;
  spec.d = 4;
  spec.n = 100000;
  spec.rule = MajorityRule{FeatureSubset::from_indices({0, 1, 2})};
  spec.seed = 75;
  const auto data = generate(spec);
  const FeatureScorer scorer(data, empirical_moments(data));
  const std::vector<std::pair<std::uint32_t, std::uint32_t>> chains{
      {0b0001, 0b0011}, {0b0011, 0b0111}, {0b0000, 0b0001}, {0b0101, 0b0111}, {0b0010, 0b1010}};
  for (auto [a, b] : chains)
    CHECK(scorer.score1(FeatureSubset{a}) <= scorer.score1(FeatureSubset{b}) + 0.01);
}

TEST_CASE("score2 equals Parseval mass of the projected empirical expansion") {
  Rng rng(76);
  const auto data = test_util::random_dataset(400, 5, rng, [&](const auto& row) {
    return static_cast<int>(row[0]) * static_cast<int>(row[3]);
  });
  const FeatureMoments m = empirical_moments(data);
  const FeatureScorer scorer(data, m);
  for (std::uint32_t mask : {0b00001u, 0b01001u, 0b11100u, 0b11111u}) {
    const FeatureSubset J{mask};
    const FourierExpansion all = empirical_coefficients(data, m, J.count());
    const FourierExpansion proj = project(all, J);
    CHECK(scorer.score2(J) == norm2_sq(proj));  // bit-for-bit equal accumulation
  }
}

TEST_CASE("exhaustive selection recovers a noiseless 2-junta") {
  const auto train = parity_data(10000, 8, 77, {0, 1});
  const auto test = parity_data(4000, 8, 78, {0, 1});
  const SelectionReport rep =
      select(train, 2, ScoreMethod::kScore2, SearchStrategy::kExhaustive);
  CHECK(rep.chosen == FeatureSubset::from_indices({0, 1}));
  CHECK(misclassification(rep.predictor, test) <= 0.01);
  CHECK(rep.all_scores.size() == 28);  // C(8,2)
}

TEST_CASE("k = d selects the full set") {
  Rng rng(79);
  const auto data = test_util::random_dataset(500, 4, rng, [&](const auto& row) {
    return static_cast<int>(row[0]);
  });
  for (ScoreMethod m : {ScoreMethod::kScore1, ScoreMethod::kScore2}) {
    const SelectionReport rep = select(data, 4, m, SearchStrategy::kExhaustive);
    CHECK(rep.chosen == FeatureSubset::full(4));
  }
}

TEST_CASE("greedy search can miss a parity that exhaustive finds") {
  const auto train = parity_data(20000, 6, 80, {0, 1});
  const SelectionReport ex = select(train, 2, ScoreMethod::kScore2, SearchStrategy::kExhaustive);
  CHECK(ex.chosen == FeatureSubset::from_indices({0, 1}));

  // Greedy sees near-zero singleton scores in round one, so its first pick
  // is arbitrary; the search must still return a size-2 subset.
  const SelectionReport gr = select(train, 2, ScoreMethod::kScore2, SearchStrategy::kGreedy);
  CHECK(gr.chosen.count() == 2);
  CHECK(gr.all_scores.size() == 2);  // one entry per round
}

TEST_CASE("ties break toward the smallest mask") {
  // On full-cube data labeled by the 3-parity, every degree-<=2 empirical
  // coefficient is exactly zero, so all size-2 subsets tie at score 0.
  BooleanTable par(16);
  for (std::uint32_t x = 0; x < 16; ++x) {
    int v = 1;
    for (int j = 0; j < 3; ++j) v *= ((x >> j) & 1u) ? 1 : -1;
    par[x] = static_cast<std::int8_t>(v);
  }
  const auto cube = test_util::full_cube_dataset(4, par);
  const SelectionReport rep = select(cube, 2, ScoreMethod::kScore2, SearchStrategy::kExhaustive);
  CHECK(rep.score == 0.0);
  CHECK(rep.chosen == FeatureSubset::from_indices({0, 1}));
}

TEST_CASE("selection reports serialize with scores and predictor") {
  const auto train = parity_data(2000, 5, 83, {0, 1});
  const SelectionReport rep = select(train, 2, ScoreMethod::kScore2, SearchStrategy::kExhaustive);
  const nlohmann::json j = rep.to_json();
  CHECK(j.at("method") == "score2");
  CHECK(j.at("search") == "exhaustive");
  CHECK(j.at("k") == 2);
  CHECK(j.at("chosen").get<std::vector<int>>() == std::vector<int>{0, 1});
  CHECK(j.at("all_scores").size() == 10);  // C(5,2)
  CHECK(j.at("predictor").at("kind") == "fourier");
}

TEST_CASE("exhaustive budget is enforced") {
  Rng rng(81);
  const auto data = test_util::random_dataset(40, 30, rng, [&](const auto& row) {
    return static_cast<int>(row[0]);
  });
  CHECK_THROWS_AS(select(data, 12, ScoreMethod::kScore2, SearchStrategy::kExhaustive),
                  BudgetError);
}

TEST_CASE("exhaustive selection with exact scores attains popt") {
  // Replacing the empirical score with the oracle's exact projection 1-norm
  // makes the chosen subset achieve popt = 1/2 - max/2.
  Rng rng(82);
  for (int rep = 0; rep < 5; ++rep) {
    const int d = 5;
    const auto dist = test_util::random_distribution(d, rng);
    const auto f = test_util::random_table(d, rng);
    const ExactProblem problem(dist, TableLabel{f});

    double best = -1.0;
    FeatureSubset bestJ;
    for (FeatureSubset J : enumerate_subsets_exact(d, 2)) {
      const double n1 = norm1_exact(dist, exact_projection(problem, J));
      if (n1 > best) {
        best = n1;
        bestJ = J;
      }
    }
    const PoptResult popt = exact_popt(problem, 2);
    CHECK(0.5 - 0.5 * best == Approx(popt.popt).margin(1e-12));
  }
}

TEST_CASE("score2 selection meets the 2Popt(1-Popt) guarantee on noisy juntas") {
  // Seeded planted noisy 3-juntas; exact test error of the selected
  // predictor must be below 2*popt*(1-popt) + 0.03 in at least 95% of runs
  // per noise level.
  const int d = 8, k = 3, n = 50000, seeds = 40;
  for (double eta : {0.05, 0.1, 0.2}) {
    int hits = 0;
    for (int s = 0; s < seeds; ++s) {
      Rng rng(mix_seed(9000 + static_cast<std::uint64_t>(eta * 1000), static_cast<std::uint64_t>(s)));
      // plant a junta in which every coordinate matters
      const std::uint32_t c0 = static_cast<std::uint32_t>(rng.below(d));
      std::uint32_t c1 = c0, c2 = c0;
      while (c1 == c0) c1 = static_cast<std::uint32_t>(rng.below(d));
      while (c2 == c0 || c2 == c1) c2 = static_cast<std::uint32_t>(rng.below(d));
      std::vector<int> coords{static_cast<int>(c0), static_cast<int>(c1), static_cast<int>(c2)};
      std::sort(coords.begin(), coords.end());
      std::vector<std::int8_t> table(8);
      while (true) {
        for (auto& v : table) v = rng.bernoulli(0.5) ? 1 : -1;
        bool relevant = true;
        for (int bit = 0; bit < 3 && relevant; ++bit) {
          bool depends = false;
          for (std::uint32_t c = 0; c < 8; ++c)
            if (table[c] != table[c ^ (1u << bit)]) depends = true;
          relevant = depends;
        }
        if (relevant) break;
      }

      SyntheticSpec spec;
      spec.d = d;
      spec.n = n;
      spec.rule = JuntaRule{FeatureSubset::from_indices(coords), table};
      spec.noise_rate = eta;
      spec.seed = mix_seed(9100, static_cast<std::uint64_t>(s) * 7 + static_cast<std::uint64_t>(eta * 100));
      const LabeledDataset train = generate(spec);
      const SelectionReport rep = select(train, k, ScoreMethod::kScore2,
                                         SearchStrategy::kExhaustive, {.collect_scores = false});

      const ExactProblem problem = synthetic_problem(spec);
      const double popt = exact_popt(problem, k).popt;
      CHECK(popt == Approx(eta).margin(1e-12));
      const double err = exact_error(problem, rep.predictor).error;
      if (err <= 2.0 * popt * (1.0 - popt) + 0.03) ++hits;
    }
    CHECK(hits >= 38);  // 95% of 40
  }
}
