#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reps/errors.hpp"
#include "reps/rng.hpp"

namespace reps {

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;

  void validate() const {
    if (!(epsilon > 0.0))
      throw InvalidBudget("epsilon must be positive, got " +
                          std::to_string(epsilon));
    if (!(delta > 0.0 && delta < 1.0))
      throw InvalidBudget("delta must lie in (0,1), got " +
                          std::to_string(delta));
  }
};

struct BudgetSplit {
  PrivacyBudget scoring;    // (0.1 eps, delta/2)
  PrivacyBudget synthesis;  // (0.9 eps, delta/2)
};

// Stage-by-stage additive accounting. Totals are coordinate-wise sums.
class CompositionLedger {
 public:
  void record(const std::string& stage, const PrivacyBudget& budget);

  double total_epsilon() const;
  double total_delta() const;
  const std::vector<std::pair<std::string, PrivacyBudget>>& entries() const {
    return entries_;
  }
  bool has_stage(const std::string& stage) const;
  PrivacyBudget stage(const std::string& stage) const;

 private:
  std::vector<std::pair<std::string, PrivacyBudget>> entries_;
};

// Classical Gaussian-mechanism calibration:
//   sigma = sensitivity * sqrt(2 ln(1.25/delta)) / epsilon.
// The closed form is tight only for epsilon < 1; following the experimental
// protocol we apply it as written for larger epsilon too.
double calibrate_sigma(double l2_sensitivity, const PrivacyBudget& budget);

// Adds iid N(0, sigma^2) per coordinate; sigma = 0 is the identity.
std::vector<double> gaussian_release(const std::vector<double>& values,
                                     double sigma, std::uint64_t seed);

// delta = 1/n^2.
double default_delta(std::size_t n);

// 10% of epsilon to scoring, 90% to synthesis, delta halved per stage.
BudgetSplit split_budget(const PrivacyBudget& total);

// Exact hockey-stick divergence between N(0, sigma^2) and N(alpha, sigma^2)
// at epsilon; the smallest delta for which the pair is
// (epsilon, delta)-indistinguishable. Zero when alpha = 0.
double hockey_stick_delta(double influence, double sigma, double epsilon);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace reps
