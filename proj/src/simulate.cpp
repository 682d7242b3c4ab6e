#include "reps/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "reps/rng.hpp"

namespace reps {

namespace {

constexpr std::size_t kContinuousFeatures = 6;
constexpr std::size_t kCategoricalFeatures = 3;
constexpr std::size_t kCommonCategories = 4;  // "A".."D"

// Inlier mixture component spread (shared component per record).
constexpr double kInlierSd = 0.14;
// Bridge sub-population: a small, isolated cluster at the origin between the
// two mixture components. These records are locally sparse, so they are the
// natural high-risk decile for a nearest-neighbour membership attack.
constexpr double kBridgeFrac = 0.125;
constexpr double kBridgeSd = 0.31;
// Bridge records lean toward one specific common category on the first
// categorical feature, which ties their attack surface to the released
// category marginals.
constexpr double kBridgeCatProb = 0.9;
constexpr int kBridgeCatValue = 1;  // "B"
// Injected outliers form a tight cluster so that they are trivially rare
// without dominating the nearest-neighbour sparsity ranking.
constexpr double kOutlierSd = 0.03;
// Per-categorical-feature probability of a rare value within outliers. Rare
// values are drawn in a correlated pattern (mostly all-rare records, the
// rest rare on two of three features) so the marginal stays at 0.9 while
// every outlier remains close to the outlier cluster in one-hot space.
constexpr double kRareCategoryProb = 0.9;
constexpr double kAllRareProb = 0.7;  // => per-feature marginal 0.9

// Logistic label model. Coefficients are balanced (they sum to zero) so the
// label does not separate the two mixture components; the scale is
// calibrated so a logistic classifier trained on the real train split scores
// ~0.77 AUROC on the held-out test split.
constexpr std::array<double, kContinuousFeatures> kContCoef = {
    0.55, 0.45, -0.40, 0.35, -0.30, -0.65};
// Additive effect per common category (rare categories carry no label
// signal of their own).
constexpr std::array<double, kCommonCategories> kCatEffect = {0.45, 0.15,
                                                              -0.15, -0.45};
constexpr double kLabelScale = 2.5;
constexpr double kLabelBias = 0.0;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Dataset simulate_dataset(std::uint64_t seed) {
  Dataset out;
  for (std::size_t j = 0; j < kContinuousFeatures; ++j)
    out.schema.features.push_back(
        {"x" + std::to_string(j + 1), FeatureKind::kContinuous, {}});
  const std::array<std::string, kCategoricalFeatures> rare = {"Z", "Q", "R"};
  for (std::size_t j = 0; j < kCategoricalFeatures; ++j)
    out.schema.features.push_back({"c" + std::to_string(j + 1),
                                   FeatureKind::kCategorical,
                                   {"A", "B", "C", "D", rare[j]}});
  out.schema.label_name = "y";
  out.schema.label_classes = {"0", "1"};

  Rng rng = make_rng(derive_seed(seed, "simulate"));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> common_cat(0, kCommonCategories - 1);
  std::uniform_int_distribution<int> cat_slot(0, kCategoricalFeatures - 1);

  // Choose which record indices carry injected outliers.
  std::vector<std::size_t> order(kSimRecords);
  for (std::size_t i = 0; i < kSimRecords; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> is_outlier(kSimRecords, false);
  for (std::size_t i = 0; i < kSimOutliers; ++i) is_outlier[order[i]] = true;

  out.rows.reserve(kSimRecords);
  for (std::size_t i = 0; i < kSimRecords; ++i) {
    Record r;
    r.is_injected_outlier = is_outlier[i];
    if (r.is_injected_outlier) {
      for (std::size_t j = 0; j < kContinuousFeatures; ++j)
        r.continuous_values.push_back(kSimOutlierMean +
                                      kOutlierSd * normal(rng));
      // Correlated rare coding: with probability kAllRareProb the record is
      // rare on every categorical feature; otherwise it is rare on two of
      // the three (the remaining slot takes the first common value).
      const int common_slot = unif(rng) < kAllRareProb ? -1 : cat_slot(rng);
      for (std::size_t j = 0; j < kCategoricalFeatures; ++j)
        r.categorical_values.push_back(
            static_cast<int>(j) == common_slot
                ? 0
                : static_cast<int>(kCommonCategories));
    } else {
      const bool is_bridge = unif(rng) < kBridgeFrac;
      // One mixture component per record, shared across features; bridge
      // records sit at the origin instead.
      const double mu = unif(rng) < 0.5 ? -kSimInlierMean : kSimInlierMean;
      for (std::size_t j = 0; j < kContinuousFeatures; ++j)
        r.continuous_values.push_back(is_bridge ? kBridgeSd * normal(rng)
                                                : mu + kInlierSd * normal(rng));
      r.categorical_values.push_back(is_bridge && unif(rng) < kBridgeCatProb
                                         ? kBridgeCatValue
                                         : common_cat(rng));
      for (std::size_t j = 1; j < kCategoricalFeatures; ++j)
        r.categorical_values.push_back(common_cat(rng));
    }

    double score = kLabelBias;
    for (std::size_t j = 0; j < kContinuousFeatures; ++j)
      score += kContCoef[j] * r.continuous_values[j];
    for (std::size_t j = 0; j < kCategoricalFeatures; ++j) {
      const int c = r.categorical_values[j];
      if (c < static_cast<int>(kCommonCategories)) score += kCatEffect[c];
    }
    r.label = unif(rng) < sigmoid(kLabelScale * score) ? 1 : 0;
    out.rows.push_back(std::move(r));
  }
  out.validate();
  return out;
}

}  // namespace reps
