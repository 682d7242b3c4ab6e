#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reps/errors.hpp"

namespace reps {

enum class FeatureKind { kContinuous, kCategorical };

struct FeatureDescriptor {
  std::string name;
  FeatureKind kind = FeatureKind::kContinuous;
  std::vector<std::string> categories;  // categorical only
};

// Mixed-type tabular schema with a binary label.
struct Schema {
  std::vector<FeatureDescriptor> features;
  std::string label_name;
  std::vector<std::string> label_classes;  // exactly 2

  std::size_t continuous_count() const;
  std::size_t categorical_count() const;
  // Index into the continuous (resp. categorical) value vector for a feature,
  // counted in schema order.
  std::size_t feature_index(const std::string& name) const;
  void validate() const;
};

struct Record {
  std::vector<double> continuous_values;  // standardized units after standardize()
  std::vector<int> categorical_values;    // category indices, schema order
  int label = 0;
  bool is_injected_outlier = false;
};

struct Dataset {
  Schema schema;
  std::vector<Record> rows;

  std::size_t size() const { return rows.size(); }
  void validate() const;
};

enum class Split : std::uint8_t { kTrain = 0, kValidation = 1, kTest = 2 };

struct SplitAssignment {
  std::vector<Split> tags;  // aligned with dataset rows

  std::vector<std::size_t> indices(Split s) const;
  std::size_t count(Split s) const;
};

struct StandardizationParams {
  std::vector<double> means;  // per continuous feature, train-split statistics
  std::vector<double> stddevs;
};

inline constexpr double kClipLow = -3.0;
inline constexpr double kClipHigh = 3.0;
inline constexpr double kTrainFraction = 0.56;
inline constexpr double kValidationFraction = 0.14;

// Fits mean/std on the train split only and applies (with clipping to
// [-3, 3]) to every row. Throws ZeroVarianceFeature for constant train
// columns.
std::pair<Dataset, StandardizationParams> standardize(
    const Dataset& dataset, const SplitAssignment& split);

// Applies previously fitted params (validation/test or fresh data).
Dataset apply_standardization(const Dataset& dataset,
                              const StandardizationParams& params);

// Deterministic stratified 56/14/30 split. Global split sizes are exact
// (largest-remainder); per-class proportions are within one record of the
// stratified target.
SplitAssignment split(const Dataset& dataset, std::uint64_t seed);

// Replaces the named continuous features by categorical features with up to
// n_bins quantile bins fitted on the train split. Duplicate quantile edges
// are merged, so fewer effective bins are possible.
Dataset quantile_bin(const Dataset& dataset, const SplitAssignment& split,
                     const std::vector<std::string>& feature_names,
                     int n_bins = 5);

// Subset view used when a stage operates on one split only.
Dataset subset(const Dataset& dataset, const std::vector<std::size_t>& indices);

}  // namespace reps
