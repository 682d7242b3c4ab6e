#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "reps/evaluation.hpp"
#include "reps/simulate.hpp"
#include "test_helpers.hpp"

using namespace reps;
using namespace reps::test;

namespace {

Dataset cont_dataset(const std::vector<std::vector<double>>& points) {
  Dataset d;
  for (std::size_t j = 0; j < points[0].size(); ++j)
    d.schema.features.push_back(
        {"x" + std::to_string(j), FeatureKind::kContinuous, {}});
  d.schema.label_name = "y";
  d.schema.label_classes = {"0", "1"};
  for (std::size_t i = 0; i < points.size(); ++i)
    d.rows.push_back(make_record(points[i], {}, static_cast<int>(i % 2)));
  return d;
}

}  // namespace

TEST_CASE("embedding concatenates continuous values and one-hot blocks") {
  const Schema schema = small_schema();
  const auto e = embed(make_record({0.5, -1.5}, {2}, 1), schema);
  REQUIRE(e.size() == 5);
  CHECK(e[0] == doctest::Approx(0.5));
  CHECK(e[1] == doctest::Approx(-1.5));
  CHECK(e[2] == 0.0);
  CHECK(e[3] == 0.0);
  CHECK(e[4] == 1.0);
}

TEST_CASE("knn deciles separate a tight cluster from a far point") {
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 99; ++i)
    pts.push_back({0.01 * i, 0.0});  // dense line segment
  pts.push_back({100.0, 100.0});     // singleton far away
  auto d = cont_dataset(pts);
  const auto assign = knn_outlier_deciles(d, 10);
  CHECK(assign.deciles[99] == 10);
  CHECK(assign.deciles[50] <= 8);  // interior of the dense segment
  CHECK(assign.knn_scores[99] > 10.0 * assign.knn_scores[50]);
}

TEST_CASE("knn deciles on n=100 have exactly ten records per decile") {
  auto d = simulate_dataset(3);
  d.rows.resize(100);
  const auto assign = knn_outlier_deciles(d, 10);
  std::vector<int> counts(11, 0);
  for (int dec : assign.deciles) counts[dec]++;
  for (int dec = 1; dec <= 10; ++dec) CHECK(counts[dec] == 10);
}

TEST_CASE("knn scores are invariant to a rigid rotation") {
  std::vector<std::vector<double>> pts, rotated;
  Rng rng = make_rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  const double theta = 0.7;
  for (int i = 0; i < 60; ++i) {
    const double x = g(rng), y = g(rng);
    pts.push_back({x, y});
    rotated.push_back({x * std::cos(theta) - y * std::sin(theta),
                       x * std::sin(theta) + y * std::cos(theta)});
  }
  auto a = knn_outlier_deciles(cont_dataset(pts), 10);
  auto b = knn_outlier_deciles(cont_dataset(rotated), 10);
  for (std::size_t i = 0; i < 60; ++i)
    CHECK(a.knn_scores[i] == doctest::Approx(b.knn_scores[i]).epsilon(1e-9));
  CHECK(a.deciles == b.deciles);
}

TEST_CASE("distance_mia scores by negated nearest distance") {
  auto synth = cont_dataset({{0.0, 0.0}, {10.0, 0.0}});
  auto queries = cont_dataset({{0.0, 0.0}, {3.0, 4.0}, {10.0, 1.0}});
  const auto s = distance_mia(synth, queries);
  CHECK(s[0] == doctest::Approx(0.0));
  CHECK(s[1] == doctest::Approx(-5.0));
  CHECK(s[2] == doctest::Approx(-1.0));
  CHECK(s[0] > s[2]);
  CHECK(s[2] > s[1]);
}

TEST_CASE("domias ratio follows reference vs synthetic proximity") {
  // k=1; query at 0: synthetic neighbour at distance 1, reference at 3.
  auto synth = cont_dataset({{1.0}, {-9.0}});
  auto reference = cont_dataset({{3.0}, {30.0}});
  auto queries = cont_dataset({{0.0}});
  const auto s = domias_mia(synth, reference, queries, 1);
  CHECK(s[0] == doctest::Approx(3.0));
}

TEST_CASE("auc on separable, tied, and mixed scores") {
  CHECK(auc({3.0, 4.0, 1.0, 2.0}, {true, true, false, false}) ==
        doctest::Approx(1.0));
  CHECK(auc({1.0, 1.0, 1.0, 1.0}, {true, false, true, false}) ==
        doctest::Approx(0.5));
  // Positives {3, 1}, negatives {2, 0}: 3 of 4 pairs correctly ordered.
  CHECK(auc({3.0, 1.0, 2.0, 0.0}, {true, true, false, false}) ==
        doctest::Approx(0.75));
}

TEST_CASE("auc matches the pairwise-comparison oracle") {
  Rng rng = make_rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> scores;
  std::vector<bool> labels;
  for (int i = 0; i < 40; ++i) {
    // Coarse quantization forces ties.
    scores.push_back(std::floor(u(rng) * 8.0));
    labels.push_back(u(rng) < 0.5);
  }
  labels[0] = true;
  labels[1] = false;
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  CHECK(auc(scores, labels) == doctest::Approx(wins / pairs).epsilon(1e-12));
}

TEST_CASE("advantage metrics on a null attack are near zero") {
  Rng rng = make_rng(30);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> members(1000), non_members(1000);
  std::vector<int> deciles(1000);
  for (int i = 0; i < 1000; ++i) {
    members[i] = u(rng);
    non_members[i] = u(rng);
    deciles[i] = i / 100 + 1;
  }
  const auto m = advantage_metrics(members, deciles, non_members);
  CHECK(m.overall < 0.1);
  REQUIRE(m.per_decile.size() == 10);
  for (double adv : m.per_decile) {
    CHECK(adv >= 0.0);
    CHECK(adv < 0.3);
  }
}

TEST_CASE("advantage metrics: identical deciles give inequality ratio one") {
  std::vector<double> members(100, 1.0), non_members(100, 0.0);
  std::vector<int> deciles(100);
  for (int i = 0; i < 100; ++i) deciles[i] = i / 10 + 1;
  const auto m = advantage_metrics(members, deciles, non_members);
  CHECK(m.overall == doctest::Approx(1.0));  // |2*1 - 1|
  CHECK(m.top_decile == doctest::Approx(1.0));
  CHECK(m.inequality_ratio == doctest::Approx(1.0));
}

TEST_CASE("advantage metrics require every decile to be populated") {
  std::vector<double> members(20, 0.5), non_members(20, 0.5);
  std::vector<int> deciles(20, 1);  // only decile 1 present
  CHECK_THROWS_AS(advantage_metrics(members, deciles, non_members),
                  EmptyDecile);
}

TEST_CASE("advantage metrics concentrate on the leaky decile") {
  Rng rng = make_rng(44);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> members(500), non_members(500);
  std::vector<int> deciles(500);
  for (int i = 0; i < 500; ++i) {
    deciles[i] = i / 50 + 1;
    members[i] = deciles[i] == 10 ? 2.0 + u(rng) : u(rng);
    non_members[i] = u(rng);
  }
  const auto m = advantage_metrics(members, deciles, non_members);
  CHECK(m.top_decile == doctest::Approx(1.0));
  CHECK(m.inequality_ratio > 5.0);
}

TEST_CASE("tstr flags single-class synthetic data as degenerate") {
  Dataset synth = cont_dataset({{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}});
  for (auto& r : synth.rows) r.label = 1;
  auto test = cont_dataset({{0.0, 0.0}, {1.0, 1.0}});
  const auto res = tstr(synth, test);
  CHECK(res.degenerate);
  CHECK(res.auroc == doctest::Approx(0.5));
}

TEST_CASE("tstr learns a linearly separable rule") {
  std::vector<std::vector<double>> train_pts, test_pts;
  Rng rng = make_rng(50);
  std::normal_distribution<double> g(0.0, 0.3);
  Dataset synth, test;
  synth.schema = test.schema = cont_dataset({{0.0, 0.0}}).schema;
  for (int i = 0; i < 200; ++i) {
    const int y = i % 2;
    const double mu = y == 1 ? 1.0 : -1.0;
    synth.rows.push_back(make_record({mu + g(rng), mu + g(rng)}, {}, y));
    test.rows.push_back(make_record({mu + g(rng), mu + g(rng)}, {}, y));
  }
  const auto res = tstr(synth, test);
  CHECK_FALSE(res.degenerate);
  CHECK(res.auroc > 0.95);
  // Deterministic given identical inputs.
  CHECK(tstr(synth, test).auroc == doctest::Approx(res.auroc));
}

TEST_CASE("rank-based attack metrics are monotone-transform invariant") {
  Rng rng = make_rng(61);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> scores;
  std::vector<bool> labels;
  for (int i = 0; i < 60; ++i) {
    scores.push_back(u(rng));
    labels.push_back(i % 2 == 0);
  }
  auto transformed = scores;
  for (double& s : transformed) s = std::exp(3.0 * s) + 7.0;
  CHECK(auc(scores, labels) ==
        doctest::Approx(auc(transformed, labels)).epsilon(1e-12));
}
