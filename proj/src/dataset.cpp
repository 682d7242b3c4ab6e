#include "reps/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "reps/rng.hpp"

namespace reps {

std::size_t Schema::continuous_count() const {
  std::size_t c = 0;
  for (const auto& f : features)
    if (f.kind == FeatureKind::kContinuous) ++c;
  return c;
}

std::size_t Schema::categorical_count() const {
  return features.size() - continuous_count();
}

std::size_t Schema::feature_index(const std::string& name) const {
  std::size_t cont = 0, cat = 0;
  for (const auto& f : features) {
    if (f.name == name)
      return f.kind == FeatureKind::kContinuous ? cont : cat;
    if (f.kind == FeatureKind::kContinuous)
      ++cont;
    else
      ++cat;
  }
  throw UnknownFeature(name);
}

void Schema::validate() const {
  std::unordered_set<std::string> names;
  for (const auto& f : features) {
    if (!names.insert(f.name).second)
      throw SchemaMismatch("duplicate feature name '" + f.name + "'");
    if (f.kind == FeatureKind::kCategorical) {
      if (f.categories.empty())
        throw SchemaMismatch("categorical feature '" + f.name +
                             "' has no categories");
      std::unordered_set<std::string> cats(f.categories.begin(),
                                           f.categories.end());
      if (cats.size() != f.categories.size())
        throw SchemaMismatch("duplicate category in feature '" + f.name + "'");
    }
  }
  if (label_classes.size() != 2)
    throw SchemaMismatch("expected exactly 2 label classes, got " +
                         std::to_string(label_classes.size()));
}

void Dataset::validate() const {
  schema.validate();
  const std::size_t n_cont = schema.continuous_count();
  const std::size_t n_cat = schema.categorical_count();
  std::vector<std::size_t> cat_sizes;
  for (const auto& f : schema.features)
    if (f.kind == FeatureKind::kCategorical)
      cat_sizes.push_back(f.categories.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Record& r = rows[i];
    if (r.continuous_values.size() != n_cont ||
        r.categorical_values.size() != n_cat)
      throw SchemaMismatch("row " + std::to_string(i) +
                           " does not match schema arity");
    for (std::size_t j = 0; j < n_cat; ++j) {
      if (r.categorical_values[j] < 0 ||
          static_cast<std::size_t>(r.categorical_values[j]) >= cat_sizes[j])
        throw SchemaMismatch("row " + std::to_string(i) +
                             " has out-of-range category index");
    }
    if (r.label < 0 || r.label > 1)
      throw SchemaMismatch("row " + std::to_string(i) +
                           " has non-binary label");
  }
}

std::vector<std::size_t> SplitAssignment::indices(Split s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tags.size(); ++i)
    if (tags[i] == s) out.push_back(i);
  return out;
}

std::size_t SplitAssignment::count(Split s) const {
  return static_cast<std::size_t>(std::count(tags.begin(), tags.end(), s));
}

std::pair<Dataset, StandardizationParams> standardize(
    const Dataset& dataset, const SplitAssignment& split) {
  const auto train = split.indices(Split::kTrain);
  if (train.empty()) throw EmptyTrainSplit("train split is empty");
  const std::size_t n_cont = dataset.schema.continuous_count();

  StandardizationParams params;
  params.means.assign(n_cont, 0.0);
  params.stddevs.assign(n_cont, 0.0);
  for (std::size_t j = 0; j < n_cont; ++j) {
    double sum = 0.0;
    for (std::size_t i : train) sum += dataset.rows[i].continuous_values[j];
    const double mean = sum / static_cast<double>(train.size());
    double ss = 0.0;
    for (std::size_t i : train) {
      const double d = dataset.rows[i].continuous_values[j] - mean;
      ss += d * d;
    }
    const double var = ss / static_cast<double>(train.size());
    if (var <= 0.0) {
      std::size_t cont = 0;
      for (const auto& f : dataset.schema.features) {
        if (f.kind != FeatureKind::kContinuous) continue;
        if (cont == j) throw ZeroVarianceFeature(f.name);
        ++cont;
      }
    }
    params.means[j] = mean;
    params.stddevs[j] = std::sqrt(var);
  }
  return {apply_standardization(dataset, params), params};
}

Dataset apply_standardization(const Dataset& dataset,
                              const StandardizationParams& params) {
  Dataset out = dataset;
  for (auto& row : out.rows) {
    for (std::size_t j = 0; j < params.means.size(); ++j) {
      double v = (row.continuous_values[j] - params.means[j]) /
                 params.stddevs[j];
      row.continuous_values[j] = std::clamp(v, kClipLow, kClipHigh);
    }
  }
  return out;
}

namespace {

// Largest-remainder allocation of `total` into buckets proportional to
// `weights`.
std::vector<std::size_t> apportion(const std::vector<double>& weights,
                                   std::size_t total) {
  const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> alloc(weights.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = weights[i] / wsum * static_cast<double>(total);
    alloc[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += alloc[i];
    remainders.push_back({exact - std::floor(exact), i});
  }
  std::sort(remainders.begin(), remainders.end(), [](auto& a, auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned)
    ++alloc[remainders[k].second];
  return alloc;
}

}  // namespace

SplitAssignment split(const Dataset& dataset, std::uint64_t seed) {
  const std::size_t n = dataset.size();
  if (n < 10) throw DatasetTooSmall("need at least 10 records to split");

  const auto n_train =
      static_cast<std::size_t>(std::llround(kTrainFraction * n));
  const auto n_val =
      static_cast<std::size_t>(std::llround(kValidationFraction * n));

  // Per-class index pools, shuffled deterministically.
  std::vector<std::vector<std::size_t>> by_class(2);
  for (std::size_t i = 0; i < n; ++i)
    by_class[dataset.rows[i].label].push_back(i);
  Rng rng = make_rng(derive_seed(seed, "split"));
  for (auto& pool : by_class) std::shuffle(pool.begin(), pool.end(), rng);

  std::vector<double> class_sizes = {static_cast<double>(by_class[0].size()),
                                     static_cast<double>(by_class[1].size())};
  const auto train_alloc = apportion(class_sizes, n_train);
  const auto val_alloc = apportion(class_sizes, n_val);

  SplitAssignment out;
  out.tags.assign(n, Split::kTest);
  for (int c = 0; c < 2; ++c) {
    std::size_t pos = 0;
    for (std::size_t k = 0; k < train_alloc[c]; ++k)
      out.tags[by_class[c][pos++]] = Split::kTrain;
    for (std::size_t k = 0; k < val_alloc[c]; ++k)
      out.tags[by_class[c][pos++]] = Split::kValidation;
  }
  return out;
}

Dataset quantile_bin(const Dataset& dataset, const SplitAssignment& split,
                     const std::vector<std::string>& feature_names,
                     int n_bins) {
  if (feature_names.empty()) return dataset;
  const auto train = split.indices(Split::kTrain);

  // Resolve names to continuous-feature positions.
  std::vector<std::size_t> targets;
  for (const auto& name : feature_names) {
    bool found = false;
    std::size_t cont = 0;
    for (const auto& f : dataset.schema.features) {
      if (f.kind != FeatureKind::kContinuous) continue;
      if (f.name == name) {
        targets.push_back(cont);
        found = true;
        break;
      }
      ++cont;
    }
    if (!found) throw UnknownFeature(name);
  }

  // Quantile edges per target feature, duplicates merged.
  std::vector<std::vector<double>> edges(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    std::vector<double> vals;
    vals.reserve(train.size());
    for (std::size_t i : train)
      vals.push_back(dataset.rows[i].continuous_values[targets[t]]);
    std::sort(vals.begin(), vals.end());
    std::set<double> uniq;
    for (int b = 1; b < n_bins; ++b) {
      const double q = static_cast<double>(b) / n_bins;
      const auto idx = static_cast<std::size_t>(
          std::min<double>(std::floor(q * vals.size()), vals.size() - 1));
      uniq.insert(vals[idx]);
    }
    edges[t].assign(uniq.begin(), uniq.end());
  }

  // Rebuild schema: targeted features become categorical, in place.
  Dataset out;
  out.schema = dataset.schema;
  std::size_t cont = 0, t_at = 0;
  std::vector<std::size_t> target_schema_pos;
  for (std::size_t f = 0; f < out.schema.features.size(); ++f) {
    if (out.schema.features[f].kind != FeatureKind::kContinuous) continue;
    auto it = std::find(targets.begin(), targets.end(), cont);
    if (it != targets.end()) {
      const std::size_t t = static_cast<std::size_t>(it - targets.begin());
      auto& desc = out.schema.features[f];
      desc.kind = FeatureKind::kCategorical;
      desc.categories.clear();
      for (std::size_t b = 0; b <= edges[t].size(); ++b)
        desc.categories.push_back("q" + std::to_string(b + 1));
      target_schema_pos.push_back(f);
      (void)t_at;
    }
    ++cont;
  }

  // Remap rows. Continuous/categorical sub-vectors are positional in schema
  // order, so rebuild both.
  out.rows.reserve(dataset.rows.size());
  for (const auto& row : dataset.rows) {
    Record r;
    r.label = row.label;
    r.is_injected_outlier = row.is_injected_outlier;
    std::size_t ci = 0, ki = 0;
    for (const auto& f : dataset.schema.features) {
      if (f.kind == FeatureKind::kContinuous) {
        const double v = row.continuous_values[ci];
        auto it = std::find(targets.begin(), targets.end(), ci);
        if (it != targets.end()) {
          const auto& e = edges[static_cast<std::size_t>(it - targets.begin())];
          int bin = static_cast<int>(
              std::upper_bound(e.begin(), e.end(), v) - e.begin());
          r.categorical_values.push_back(bin);
        } else {
          r.continuous_values.push_back(v);
        }
        ++ci;
      } else {
        r.categorical_values.push_back(row.categorical_values[ki]);
        ++ki;
      }
    }
    out.rows.push_back(std::move(r));
  }
  out.validate();
  return out;
}

Dataset subset(const Dataset& dataset,
               const std::vector<std::size_t>& indices) {
  Dataset out;
  out.schema = dataset.schema;
  out.rows.reserve(indices.size());
  for (std::size_t i : indices) out.rows.push_back(dataset.rows[i]);
  return out;
}

}  // namespace reps
