#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "reps/dataset.hpp"
#include "reps/rng.hpp"

namespace reps::test {

// Small mixed-type schema: 2 continuous + 1 categorical (3 categories).
inline Schema small_schema() {
  Schema s;
  s.features = {{"a", FeatureKind::kContinuous, {}},
                {"b", FeatureKind::kContinuous, {}},
                {"c", FeatureKind::kCategorical, {"u", "v", "w"}}};
  s.label_name = "y";
  s.label_classes = {"0", "1"};
  return s;
}

inline Record make_record(std::vector<double> cont, std::vector<int> cat,
                          int label) {
  Record r;
  r.continuous_values = std::move(cont);
  r.categorical_values = std::move(cat);
  r.label = label;
  return r;
}

// Random dataset on small_schema with standardized-range values.
inline Dataset random_dataset(std::size_t n, std::uint64_t seed) {
  Dataset d;
  d.schema = small_schema();
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> cont(-3.0, 3.0);
  std::uniform_int_distribution<int> cat(0, 2);
  std::uniform_int_distribution<int> label(0, 1);
  for (std::size_t i = 0; i < n; ++i)
    d.rows.push_back(
        make_record({cont(rng), cont(rng)}, {cat(rng)}, label(rng)));
  return d;
}

inline std::vector<double> random_weights(std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed ^ 0x5eedULL);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(n);
  for (auto& x : w) x = u(rng);
  return w;
}

}  // namespace reps::test
