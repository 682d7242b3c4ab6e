#include <doctest.h>

#include <cmath>

#include "reps/synthesis.hpp"
#include "test_helpers.hpp"

using namespace reps;
using namespace reps::test;

TEST_CASE("stat encoding layout and sparsity") {
  const Schema schema = small_schema();
  const StatEncoding enc(schema);
  // 2 (labels) + 2*3 (one categorical) + 4*2 (two continuous).
  CHECK(enc.dimension() == 16);

  const Record r = make_record({2.0, -1.0}, {1}, 1);
  const auto phi = enc.encode(r);
  CHECK(phi[0] == 0.0);
  CHECK(phi[1] == 1.0);  // label one-hot
  CHECK(phi[enc.categorical_offset(0) + 1 * 3 + 1] == 1.0);
  CHECK(phi[enc.continuous_offset(0) + 2] == doctest::Approx(2.0));
  CHECK(phi[enc.continuous_offset(0) + 3] == doctest::Approx(4.0));
  double nonzero = 0;
  for (double v : phi) nonzero += v != 0.0 ? 1 : 0;
  CHECK(nonzero == 1 + 1 + 4);  // label + category + two moment blocks
}

TEST_CASE("clip preserves direction and bounds the norm") {
  const std::vector<double> small = {0.3, 0.4};
  CHECK(clip(small, 1.0) == small);

  const auto clipped = clip({3.0, 4.0}, 1.0);
  CHECK(clipped[0] == doctest::Approx(0.6));
  CHECK(clipped[1] == doctest::Approx(0.8));

  for (double c : {0.5, 2.0, 10.0}) {
    const std::vector<double> u = {1.0, -2.0, 2.0};
    const auto v = clip(u, c);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    CHECK(std::sqrt(norm) == doctest::Approx(std::min(3.0, c)));
  }
}

TEST_CASE("weighted aggregate reduces to the plain mean at unit weights") {
  auto d = random_dataset(40, 6);
  const StatEncoding enc(d.schema);
  const std::vector<double> ones(40, 1.0);
  const auto agg = weighted_aggregate(d, ones, 1e9, enc);
  std::vector<double> mean(enc.dimension(), 0.0);
  for (const auto& row : d.rows) {
    const auto phi = enc.encode(row);
    for (std::size_t k = 0; k < phi.size(); ++k) mean[k] += phi[k] / 40.0;
  }
  for (std::size_t k = 0; k < mean.size(); ++k)
    CHECK(agg[k] == doctest::Approx(mean[k]).epsilon(1e-12));
}

TEST_CASE("weighted aggregate hand example") {
  // Two identical records with x = 2, weights (1, 0.5), no clipping:
  // the moment coordinate holds (2*1 + 2*0.5)/2 = 1.5.
  Dataset d;
  d.schema.features = {{"x", FeatureKind::kContinuous, {}}};
  d.schema.label_name = "y";
  d.schema.label_classes = {"0", "1"};
  d.rows.push_back(make_record({2.0}, {}, 0));
  d.rows.push_back(make_record({2.0}, {}, 0));
  const StatEncoding enc(d.schema);
  const auto agg = weighted_aggregate(d, {1.0, 0.5}, 10.0, enc);
  CHECK(agg[enc.continuous_offset(0)] == doctest::Approx(1.5));
  CHECK(agg[0] == doctest::Approx(0.75));  // label-0 mass
}

TEST_CASE("weighted aggregate validates lengths") {
  auto d = random_dataset(5, 1);
  const StatEncoding enc(d.schema);
  CHECK_THROWS_AS(weighted_aggregate(d, {1.0, 1.0}, 1.0, enc),
                  LengthMismatch);
}

TEST_CASE("release_stats calibrates sigma to C/n") {
  auto d = random_dataset(50, 4);
  const std::vector<double> ones(50, 1.0);
  const PrivacyBudget budget{0.9, 5e-7};
  CompositionLedger ledger;
  const auto stats = release_stats(d, ones, 20.0, budget, 1, &ledger);
  CHECK(stats.sigma == doctest::Approx(calibrate_sigma(20.0 / 50.0, budget)));
  CHECK(stats.n == 50);
  CHECK(ledger.has_stage("synthesis"));

  // Different seeds give different releases under the same ledger entry.
  const auto other = release_stats(d, ones, 20.0, budget, 2);
  CHECK(stats.values != other.values);
}

TEST_CASE("fit_model recovers label proportions from exact stats") {
  Dataset d;
  d.schema = small_schema();
  for (int i = 0; i < 100; ++i)
    d.rows.push_back(make_record({0.5, -0.5}, {i % 3}, i < 60 ? 1 : 0));
  const StatEncoding enc(d.schema);
  NoisyStats stats;
  stats.values = weighted_aggregate(d, std::vector<double>(100, 1.0), 1e9,
                                    enc);
  stats.n = 100;
  stats.clip_c = 1e9;
  const auto model = fit_model(stats, d.schema);
  CHECK(model.label_probs[1] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(model.label_probs[0] == doctest::Approx(0.4).epsilon(1e-12));
  // Constant continuous feature: mean exact, variance floored.
  CHECK(model.means[0][1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(model.variances[0][1] == doctest::Approx(kVarFloor));
}

TEST_CASE("fit_model matches maximum-likelihood Naive Bayes exactly") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto d = random_dataset(60, 100 + seed);
    const StatEncoding enc(d.schema);
    NoisyStats stats;
    stats.values = weighted_aggregate(d, std::vector<double>(60, 1.0), 1e9,
                                      enc);
    stats.n = 60;
    stats.clip_c = 1e9;
    const auto model = fit_model(stats, d.schema);

    // Direct ML estimates.
    for (int y = 0; y < 2; ++y) {
      std::vector<const Record*> group;
      for (const auto& r : d.rows)
        if (r.label == y) group.push_back(&r);
      CHECK(model.label_probs[y] ==
            doctest::Approx(group.size() / 60.0).epsilon(1e-12));
      for (int c = 0; c < 3; ++c) {
        double count = 0.0;
        for (auto* r : group) count += r->categorical_values[0] == c ? 1 : 0;
        CHECK(model.categorical_probs[0][y][c] ==
              doctest::Approx(count / group.size()).epsilon(1e-10));
      }
      for (int j = 0; j < 2; ++j) {
        double s1 = 0.0, s2 = 0.0;
        for (auto* r : group) {
          s1 += r->continuous_values[j];
          s2 += r->continuous_values[j] * r->continuous_values[j];
        }
        const double mean = s1 / group.size();
        const double var = s2 / group.size() - mean * mean;
        CHECK(model.means[j][y] == doctest::Approx(mean).epsilon(1e-10));
        CHECK(model.variances[j][y] == doctest::Approx(var).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("fit_model clamps negative noisy counts") {
  const Schema schema = small_schema();
  const StatEncoding enc(schema);
  NoisyStats stats;
  stats.values.assign(enc.dimension(), 0.1);
  stats.values[enc.categorical_offset(0)] = -5.0;  // label 0, category 0
  stats.n = 100;
  stats.clip_c = 20.0;
  const auto model = fit_model(stats, schema);
  CHECK(model.categorical_probs[0][0][0] == doctest::Approx(0.0));
  double sum = 0.0;
  for (double p : model.categorical_probs[0][0]) sum += p;
  CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("sample basics") {
  const Schema schema = small_schema();
  SynthModel model;
  model.label_probs = {0.0, 1.0};
  model.categorical_probs = {{{1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}}};
  model.means = {{0.0, 1.0}, {0.0, -1.0}};
  model.variances = {{0.01, 0.01}, {0.01, 0.01}};

  CHECK(sample(model, schema, 0, 1).rows.empty());

  const auto synth = sample(model, schema, 200, 1);
  for (const auto& r : synth.rows) {
    CHECK(r.label == 1);
    CHECK(r.categorical_values[0] == 2);
    CHECK(r.continuous_values[0] >= -3.0);
    CHECK(r.continuous_values[0] <= 3.0);
  }
}

TEST_CASE("sampled label frequency concentrates around the model prob") {
  const Schema schema = small_schema();
  SynthModel model;
  model.label_probs = {0.3, 0.7};
  model.categorical_probs = {
      {{0.5, 0.3, 0.2}, {0.2, 0.3, 0.5}}};
  model.means = {{0.0, 1.0}, {0.0, -1.0}};
  model.variances = {{1.0, 1.0}, {1.0, 1.0}};
  const std::size_t m = 100000;
  const auto synth = sample(model, schema, m, 9);
  double ones = 0.0;
  for (const auto& r : synth.rows) ones += r.label;
  const double p = 0.7;
  const double band = 4.0 * std::sqrt(p * (1 - p) / m);
  CHECK(std::abs(ones / m - p) < band);
}

TEST_CASE("hard removal drops exactly the top decile under distinct scores") {
  auto d = random_dataset(100, 55);
  std::vector<double> scores(100);
  for (int i = 0; i < 100; ++i) scores[i] = i;  // distinct
  const auto result =
      hard_removal_synthesis(d, scores, {0.9, 5e-7}, 20.0, 3);
  CHECK(result.stats.weights.size() == 90);
  CHECK(result.stats.n == 100);  // padding convention
  CHECK(result.stats.sigma ==
        doctest::Approx(calibrate_sigma(20.0 / 100.0, {0.9, 5e-7})));
}

TEST_CASE("hard removal with equal scores removes nothing") {
  auto d = random_dataset(50, 56);
  const std::vector<double> scores(50, 2.5);
  const auto result =
      hard_removal_synthesis(d, scores, {0.9, 5e-7}, 20.0, 3);
  CHECK(result.stats.weights.size() == 50);
}
