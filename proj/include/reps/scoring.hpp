#pragma once

#include <cstdint>
#include <vector>

#include "reps/dataset.hpp"
#include "reps/dp.hpp"

namespace reps {

inline constexpr int kContinuousBins = 16;
inline constexpr double kDefaultPMin = 0.01;

// Per-feature marginal histogram layout: 16 uniform bins over [-3,3] for
// continuous features, exact categories for categorical ones. All feature
// histograms are concatenated into one vector for the joint release.
class HistogramLayout {
 public:
  explicit HistogramLayout(const Schema& schema);

  std::size_t feature_count() const { return bin_counts_.size(); }
  std::size_t bins(std::size_t feature) const { return bin_counts_[feature]; }
  std::size_t total_dimension() const { return offsets_.back(); }
  // Flat coordinate of the bin a record occupies for a given feature.
  std::size_t flat_bin(const Record& record, std::size_t feature) const;

 private:
  std::vector<std::size_t> bin_counts_;  // B_j per feature, schema order
  std::vector<std::size_t> offsets_;     // prefix sums, size features+1
  std::vector<bool> is_continuous_;
  std::vector<std::size_t> value_index_;  // position in the record sub-vector
};

struct NoisyHistograms {
  std::vector<double> counts;  // length = layout total dimension
  double sigma = 0.0;
  double sensitivity = 0.0;
};

struct RiskScores {
  std::vector<double> scores;          // per train record
  std::vector<double> probabilities;   // p-tilde per flat bin, for audit
  double p_min = kDefaultPMin;
};

// Joint release of all marginal histograms with a single Gaussian
// mechanism invocation. Each record occupies one bin per feature, so the
// l2 sensitivity of the concatenated count vector is sqrt(d).
NoisyHistograms release_histograms(const Dataset& train,
                                   const HistogramLayout& layout,
                                   const PrivacyBudget& budget,
                                   std::uint64_t seed);

// Rarity score per train record: negative log product of its (clamped,
// renormalized) noisy marginal probabilities, floored at p_min. Pure
// post-processing of the released histograms.
RiskScores rarity_scores(const NoisyHistograms& noisy, const Dataset& train,
                         const HistogramLayout& layout,
                         double p_min = kDefaultPMin);

struct ScorerQuality {
  double spearman = 0.0;
  double recall_at_top10 = 0.0;
};

// Spearman rank correlation (average ranks for ties) and overlap of the
// top deciles between DP scores and an oracle scoring.
ScorerQuality scorer_quality(const std::vector<double>& dp_scores,
                             const std::vector<double>& oracle_scores);

// Indices of the ceil(fraction * n) highest-scoring records; ties broken by
// lower index first.
std::vector<std::size_t> top_fraction_indices(const std::vector<double>& scores,
                                              double fraction);

}  // namespace reps
