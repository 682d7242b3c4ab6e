#include "reps/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace reps {

StatEncoding::StatEncoding(const Schema& schema) {
  dimension_ = 2;  // label frequency block
  for (const auto& f : schema.features) {
    if (f.kind == FeatureKind::kCategorical) {
      cat_offsets_.push_back(dimension_);
      cat_sizes_.push_back(f.categories.size());
      dimension_ += 2 * f.categories.size();
    }
  }
  for (const auto& f : schema.features) {
    if (f.kind == FeatureKind::kContinuous) {
      cont_offsets_.push_back(dimension_);
      dimension_ += 4;  // 2 labels x (x, x^2)
    }
  }
}

std::vector<double> StatEncoding::encode(const Record& record) const {
  std::vector<double> phi(dimension_, 0.0);
  const auto y = static_cast<std::size_t>(record.label);
  phi[y] = 1.0;
  for (std::size_t j = 0; j < cat_offsets_.size(); ++j) {
    const auto c = static_cast<std::size_t>(record.categorical_values[j]);
    phi[cat_offsets_[j] + y * cat_sizes_[j] + c] = 1.0;
  }
  for (std::size_t j = 0; j < cont_offsets_.size(); ++j) {
    const double x = record.continuous_values[j];
    phi[cont_offsets_[j] + y * 2] = x;
    phi[cont_offsets_[j] + y * 2 + 1] = x * x;
  }
  return phi;
}

std::vector<double> clip(const std::vector<double>& u, double clip_c) {
  if (!(clip_c > 0.0)) throw ConfigError("clip norm C must be positive");
  double norm2 = 0.0;
  for (double v : u) norm2 += v * v;
  const double norm = std::sqrt(norm2);
  if (norm <= clip_c) return u;
  std::vector<double> out(u.size());
  const double scale = clip_c / norm;
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] * scale;
  return out;
}

std::vector<double> weighted_aggregate(const Dataset& records,
                                       const std::vector<double>& weights,
                                       double clip_c,
                                       const StatEncoding& encoding,
                                       std::size_t normalization_n) {
  if (records.rows.size() != weights.size())
    throw LengthMismatch("weights and records differ in length");
  const std::size_t n =
      normalization_n == 0 ? records.rows.size() : normalization_n;
  std::vector<double> sum(encoding.dimension(), 0.0);
  // Fixed-order summation keeps runs byte-reproducible.
  for (std::size_t i = 0; i < records.rows.size(); ++i) {
    const auto contrib = clip(encoding.encode(records.rows[i]), clip_c);
    for (std::size_t k = 0; k < sum.size(); ++k)
      sum[k] += weights[i] * contrib[k];
  }
  for (double& v : sum) v /= static_cast<double>(n);
  return sum;
}

NoisyStats release_stats(const Dataset& records,
                         const std::vector<double>& weights, double clip_c,
                         const PrivacyBudget& budget, std::uint64_t seed,
                         CompositionLedger* ledger,
                         std::size_t normalization_n) {
  budget.validate();
  const StatEncoding encoding(records.schema);
  NoisyStats out;
  out.clip_c = clip_c;
  out.n = normalization_n == 0 ? records.rows.size() : normalization_n;
  out.weights = weights;
  out.sigma = calibrate_sigma(clip_c / static_cast<double>(out.n), budget);
  const auto f_w =
      weighted_aggregate(records, weights, clip_c, encoding, out.n);
  out.values =
      gaussian_release(f_w, out.sigma, derive_seed(seed, "synthesis_noise"));
  if (ledger) ledger->record("synthesis", budget);
  return out;
}

SynthModel fit_model(const NoisyStats& stats, const Schema& schema) {
  const StatEncoding enc(schema);
  if (stats.values.size() != enc.dimension())
    throw LengthMismatch("stats vector does not match schema encoding");
  const double mass_floor = 1.0 / static_cast<double>(std::max<std::size_t>(
                                      stats.n, 1));
  SynthModel model;

  // Label probabilities: clamp then normalize, uniform fallback.
  std::vector<double> mass = {std::max(stats.values[0], 0.0),
                              std::max(stats.values[1], 0.0)};
  const double mass_sum = mass[0] + mass[1];
  if (mass_sum > 0.0)
    model.label_probs = {mass[0] / mass_sum, mass[1] / mass_sum};
  else
    model.label_probs = {0.5, 0.5};

  for (std::size_t j = 0; j < enc.categorical_count(); ++j) {
    const std::size_t cats = enc.categorical_cardinality(j);
    std::vector<std::vector<double>> per_label(2,
                                               std::vector<double>(cats, 0.0));
    for (std::size_t y = 0; y < 2; ++y) {
      double total = 0.0;
      for (std::size_t c = 0; c < cats; ++c) {
        const double v = std::max(
            stats.values[enc.categorical_offset(j) + y * cats + c], 0.0);
        per_label[y][c] = v;
        total += v;
      }
      if (total > 0.0)
        for (double& v : per_label[y]) v /= total;
      else
        for (double& v : per_label[y]) v = 1.0 / static_cast<double>(cats);
    }
    model.categorical_probs.push_back(std::move(per_label));
  }

  for (std::size_t j = 0; j < enc.continuous_count(); ++j) {
    std::vector<double> mean(2, 0.0), var(2, kVarFloor);
    for (std::size_t y = 0; y < 2; ++y) {
      const double m_y = std::max(mass[y], mass_floor);
      const double s1 = stats.values[enc.continuous_offset(j) + y * 2];
      const double s2 = stats.values[enc.continuous_offset(j) + y * 2 + 1];
      mean[y] = s1 / m_y;
      var[y] = std::max(s2 / m_y - mean[y] * mean[y], kVarFloor);
    }
    model.means.push_back(std::move(mean));
    model.variances.push_back(std::move(var));
  }
  return model;
}

Dataset sample(const SynthModel& model, const Schema& schema, std::size_t m,
               std::uint64_t seed) {
  Dataset out;
  out.schema = schema;
  out.rows.reserve(m);
  Rng rng = make_rng(derive_seed(seed, "sample"));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  auto draw_categorical = [&](const std::vector<double>& probs) {
    double u = unif(rng);
    for (std::size_t c = 0; c + 1 < probs.size(); ++c) {
      if (u < probs[c]) return static_cast<int>(c);
      u -= probs[c];
    }
    return static_cast<int>(probs.size() - 1);
  };

  for (std::size_t i = 0; i < m; ++i) {
    Record r;
    r.label = unif(rng) < model.label_probs[1] ? 1 : 0;
    const auto y = static_cast<std::size_t>(r.label);
    for (std::size_t j = 0; j < model.categorical_probs.size(); ++j)
      r.categorical_values.push_back(
          draw_categorical(model.categorical_probs[j][y]));
    for (std::size_t j = 0; j < model.means.size(); ++j) {
      const double mu = model.means[j][y];
      const double sd = std::sqrt(model.variances[j][y]);
      // Truncated normal by rejection; clamp if the window is far out in
      // the tail.
      double x = 0.0;
      bool ok = false;
      for (int attempt = 0; attempt < 100; ++attempt) {
        x = mu + sd * normal(rng);
        if (x >= kClipLow && x <= kClipHigh) {
          ok = true;
          break;
        }
      }
      if (!ok) x = std::clamp(mu, kClipLow, kClipHigh);
      r.continuous_values.push_back(x);
    }
    out.rows.push_back(std::move(r));
  }
  return out;
}

SynthesisResult hard_removal_synthesis(const Dataset& records,
                                       const std::vector<double>& scores,
                                       const PrivacyBudget& budget,
                                       double clip_c, std::uint64_t seed,
                                       CompositionLedger* ledger) {
  if (scores.size() != records.rows.size())
    throw LengthMismatch("scores not aligned to records");
  const std::size_t n = records.rows.size();
  // Threshold at the floor(0.9 n)-th smallest score; records strictly above
  // are removed. Under distinct scores this drops exactly ceil(0.1 n)
  // records; under all-equal scores it drops none.
  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t rank = static_cast<std::size_t>(
      std::floor(0.9 * static_cast<double>(n)));
  const double threshold = sorted[rank == 0 ? 0 : rank - 1];
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i)
    if (!(scores[i] > threshold)) keep.push_back(i);

  const Dataset remainder = subset(records, keep);
  const std::vector<double> weights(remainder.rows.size(), 1.0);
  SynthesisResult result;
  // Padding convention: normalization and sensitivity keep the original n.
  result.stats = release_stats(remainder, weights, clip_c, budget, seed,
                               ledger, n);
  result.model = fit_model(result.stats, records.schema);
  result.synthetic = sample(result.model, records.schema, n,
                            derive_seed(seed, "hard_removal_sample"));
  return result;
}

}  // namespace reps
