#include "reps/dp.hpp"

#include <algorithm>
#include <cmath>

namespace reps {

void CompositionLedger::record(const std::string& stage,
                               const PrivacyBudget& budget) {
  budget.validate();
  entries_.push_back({stage, budget});
}

double CompositionLedger::total_epsilon() const {
  double t = 0.0;
  for (const auto& [_, b] : entries_) t += b.epsilon;
  return t;
}

double CompositionLedger::total_delta() const {
  double t = 0.0;
  for (const auto& [_, b] : entries_) t += b.delta;
  return t;
}

bool CompositionLedger::has_stage(const std::string& stage) const {
  for (const auto& [name, _] : entries_)
    if (name == stage) return true;
  return false;
}

PrivacyBudget CompositionLedger::stage(const std::string& stage) const {
  for (const auto& [name, b] : entries_)
    if (name == stage) return b;
  throw MissingStage("ledger has no stage '" + stage + "'");
}

double calibrate_sigma(double l2_sensitivity, const PrivacyBudget& budget) {
  if (!(l2_sensitivity > 0.0))
    throw InvalidBudget("sensitivity must be positive");
  budget.validate();
  return l2_sensitivity * std::sqrt(2.0 * std::log(1.25 / budget.delta)) /
         budget.epsilon;
}

std::vector<double> gaussian_release(const std::vector<double>& values,
                                     double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw InvalidBudget("sigma must be non-negative");
  if (sigma == 0.0) return values;
  Rng rng = make_rng(derive_seed(seed, "gaussian_release"));
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = values[i] + noise(rng);
  return out;
}

double default_delta(std::size_t n) {
  return 1.0 / (static_cast<double>(n) * static_cast<double>(n));
}

BudgetSplit split_budget(const PrivacyBudget& total) {
  total.validate();
  return {{0.1 * total.epsilon, total.delta / 2.0},
          {0.9 * total.epsilon, total.delta / 2.0}};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double hockey_stick_delta(double influence, double sigma, double epsilon) {
  if (influence < 0.0) throw InvalidBudget("influence must be non-negative");
  if (influence == 0.0) return 0.0;
  if (!(sigma > 0.0)) throw InvalidBudget("sigma must be positive");
  const double a = influence / (2.0 * sigma);
  const double b = epsilon * sigma / influence;
  const double d =
      normal_cdf(a - b) - std::exp(epsilon) * normal_cdf(-a - b);
  return std::max(d, 0.0);
}

}  // namespace reps
