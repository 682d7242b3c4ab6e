#pragma once

#include <cstdint>

#include "reps/dataset.hpp"

namespace reps {

// Desk-scale benchmark generator with controlled outlier injection:
// n = 6000 records, 6 continuous features, 3 categorical features, and
// exactly 120 injected outliers with per-feature continuous mean 2.4 and
// rare categories ("Z", "Q", "R") that never occur in inliers.
//
// Inlier continuous features follow a two-component Gaussian mixture with
// component means -0.8 / +0.8 (component shared across the record's
// features), plus a small "bridge" sub-population centred at the origin that
// is sparsely populated and therefore carries elevated re-identification
// risk under a distance attack. Binary label follows a logistic model over
// both feature kinds. Pure function of the seed.
Dataset simulate_dataset(std::uint64_t seed);

inline constexpr std::size_t kSimRecords = 6000;
inline constexpr std::size_t kSimOutliers = 120;
inline constexpr double kSimInlierMean = 0.8;
inline constexpr double kSimOutlierMean = 2.4;

}  // namespace reps
