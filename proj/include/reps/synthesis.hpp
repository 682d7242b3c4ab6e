#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "reps/dataset.hpp"
#include "reps/dp.hpp"

namespace reps {

inline constexpr double kDefaultClipC = 6.0;
inline constexpr double kVarFloor = 1e-3;

// Block layout of the per-record sufficient-statistics encoding:
//   [label frequencies (2)]
//   [per categorical feature: label-conditional one-hot, 2*|categories|]
//   [per continuous feature: label-conditional (x, x^2) moments, 4]
// The null record encodes to the zero vector.
class StatEncoding {
 public:
  explicit StatEncoding(const Schema& schema);

  std::size_t dimension() const { return dimension_; }
  std::vector<double> encode(const Record& record) const;

  std::size_t label_offset() const { return 0; }
  std::size_t categorical_offset(std::size_t cat_feature) const {
    return cat_offsets_[cat_feature];
  }
  std::size_t categorical_cardinality(std::size_t cat_feature) const {
    return cat_sizes_[cat_feature];
  }
  std::size_t continuous_offset(std::size_t cont_feature) const {
    return cont_offsets_[cont_feature];
  }
  std::size_t categorical_count() const { return cat_offsets_.size(); }
  std::size_t continuous_count() const { return cont_offsets_.size(); }

 private:
  std::size_t dimension_ = 0;
  std::vector<std::size_t> cat_offsets_;
  std::vector<std::size_t> cat_sizes_;
  std::vector<std::size_t> cont_offsets_;
};

// clip(u, C) = u * min(1, C / ||u||_2).
std::vector<double> clip(const std::vector<double>& u, double clip_c);

// f_w(D) = (1/n) sum_i w_i * clip(phi(z_i), C). `normalization_n` overrides
// the divisor (padding convention for hard removal); 0 means records.size().
std::vector<double> weighted_aggregate(const Dataset& records,
                                       const std::vector<double>& weights,
                                       double clip_c,
                                       const StatEncoding& encoding,
                                       std::size_t normalization_n = 0);

struct NoisyStats {
  std::vector<double> values;
  double sigma = 0.0;
  double clip_c = 0.0;
  std::size_t n = 0;  // normalization count used for sensitivity C/n
  std::vector<double> weights;
};

// Single Gaussian release of the weighted clipped aggregate with
// sensitivity C/n. Records the stage in the ledger when one is given.
NoisyStats release_stats(const Dataset& records,
                         const std::vector<double>& weights, double clip_c,
                         const PrivacyBudget& budget, std::uint64_t seed,
                         CompositionLedger* ledger = nullptr,
                         std::size_t normalization_n = 0);

// Conditional Gaussian Naive Bayes parameters recovered from a noisy
// sufficient-statistics release.
struct SynthModel {
  std::vector<double> label_probs;  // size 2
  // [cat feature][label][category]
  std::vector<std::vector<std::vector<double>>> categorical_probs;
  // [cont feature][label]
  std::vector<std::vector<double>> means;
  std::vector<std::vector<double>> variances;
};

SynthModel fit_model(const NoisyStats& stats, const Schema& schema);

// m iid draws; continuous values truncated to [-3, 3].
Dataset sample(const SynthModel& model, const Schema& schema, std::size_t m,
               std::uint64_t seed);

struct SynthesisResult {
  Dataset synthetic;
  NoisyStats stats;
  SynthModel model;
};

// Drops the top ceil(0.1 n) records by DP score, then runs the uniform
// pipeline on the remainder. Normalization and sensitivity keep the
// original n.
SynthesisResult hard_removal_synthesis(const Dataset& records,
                                       const std::vector<double>& scores,
                                       const PrivacyBudget& budget,
                                       double clip_c, std::uint64_t seed,
                                       CompositionLedger* ledger = nullptr);

}  // namespace reps
