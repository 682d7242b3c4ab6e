#include "reps/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace reps {

HistogramLayout::HistogramLayout(const Schema& schema) {
  std::size_t cont = 0, cat = 0;
  offsets_.push_back(0);
  for (const auto& f : schema.features) {
    if (f.kind == FeatureKind::kContinuous) {
      bin_counts_.push_back(kContinuousBins);
      is_continuous_.push_back(true);
      value_index_.push_back(cont++);
    } else {
      bin_counts_.push_back(f.categories.size());
      is_continuous_.push_back(false);
      value_index_.push_back(cat++);
    }
    offsets_.push_back(offsets_.back() + bin_counts_.back());
  }
}

std::size_t HistogramLayout::flat_bin(const Record& record,
                                      std::size_t feature) const {
  std::size_t bin;
  if (is_continuous_[feature]) {
    const double v = record.continuous_values[value_index_[feature]];
    const double scaled = (v - kClipLow) / (kClipHigh - kClipLow);
    auto b = static_cast<long>(std::floor(scaled * kContinuousBins));
    bin = static_cast<std::size_t>(
        std::clamp<long>(b, 0, kContinuousBins - 1));
  } else {
    bin = static_cast<std::size_t>(
        record.categorical_values[value_index_[feature]]);
  }
  return offsets_[feature] + bin;
}

NoisyHistograms release_histograms(const Dataset& train,
                                   const HistogramLayout& layout,
                                   const PrivacyBudget& budget,
                                   std::uint64_t seed) {
  if (train.rows.empty()) throw EmptyTrainSplit("no train records to score");
  std::vector<double> counts(layout.total_dimension(), 0.0);
  for (const auto& row : train.rows)
    for (std::size_t j = 0; j < layout.feature_count(); ++j)
      counts[layout.flat_bin(row, j)] += 1.0;

  NoisyHistograms out;
  out.sensitivity = std::sqrt(static_cast<double>(layout.feature_count()));
  out.sigma = calibrate_sigma(out.sensitivity, budget);
  out.counts = gaussian_release(counts, out.sigma,
                                derive_seed(seed, "scoring_noise"));
  return out;
}

RiskScores rarity_scores(const NoisyHistograms& noisy, const Dataset& train,
                         const HistogramLayout& layout, double p_min) {
  RiskScores out;
  out.p_min = p_min;
  out.probabilities.assign(noisy.counts.size(), p_min);

  std::size_t offset = 0;
  for (std::size_t j = 0; j < layout.feature_count(); ++j) {
    const std::size_t bins = layout.bins(j);
    double total = 0.0;
    for (std::size_t b = 0; b < bins; ++b)
      total += std::max(noisy.counts[offset + b], 0.0);
    if (total > 0.0) {
      for (std::size_t b = 0; b < bins; ++b)
        out.probabilities[offset + b] =
            std::max(noisy.counts[offset + b], 0.0) / total;
    }
    // total == 0: every probability stays at p_min (heavy-noise fallback).
    offset += bins;
  }

  out.scores.reserve(train.rows.size());
  for (const auto& row : train.rows) {
    double s = 0.0;
    for (std::size_t j = 0; j < layout.feature_count(); ++j) {
      const double p = out.probabilities[layout.flat_bin(row, j)];
      s -= std::log(std::max(p, p_min));
    }
    out.scores.push_back(s);
  }
  return out;
}

namespace {

// Average ranks (1-based), ties share the mean rank.
std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double mean_rank = (static_cast<double>(i) + j) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

std::vector<std::size_t> top_fraction_indices(const std::vector<double>& scores,
                                              double fraction) {
  const std::size_t n = scores.size();
  const auto k = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return scores[a] > scores[b];
  });
  order.resize(std::min(k, n));
  return order;
}

ScorerQuality scorer_quality(const std::vector<double>& dp_scores,
                             const std::vector<double>& oracle_scores) {
  if (dp_scores.size() != oracle_scores.size())
    throw LengthMismatch("score vectors differ in length");
  if (dp_scores.size() < 10)
    throw LengthMismatch("need at least 10 scores");

  ScorerQuality q;
  q.spearman = pearson(average_ranks(dp_scores), average_ranks(oracle_scores));

  const auto dp_top = top_fraction_indices(dp_scores, 0.1);
  const auto oracle_top = top_fraction_indices(oracle_scores, 0.1);
  std::vector<bool> in_dp(dp_scores.size(), false);
  for (std::size_t i : dp_top) in_dp[i] = true;
  std::size_t hits = 0;
  for (std::size_t i : oracle_top)
    if (in_dp[i]) ++hits;
  q.recall_at_top10 =
      static_cast<double>(hits) / static_cast<double>(oracle_top.size());
  return q;
}

}  // namespace reps
