#include "reps/weighting.hpp"

#include <algorithm>
#include <cmath>

#include "reps/rng.hpp"

namespace reps {

std::vector<double> cap_weights(const std::vector<double>& scores,
                                double tau) {
  if (!(tau > 0.0)) throw ConfigError("cap tau must be positive");
  std::vector<double> w(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    w[i] = std::min(1.0, tau / (scores[i] + tau));
  return w;
}

std::vector<double> hinge_exp_weights(const std::vector<double>& scores,
                                      double gamma, double threshold) {
  if (gamma < 0.0) throw ConfigError("hinge-exp gamma must be non-negative");
  std::vector<double> w(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    w[i] = std::exp(-gamma * std::max(scores[i] - threshold, 0.0));
  return w;
}

double score_percentile(const std::vector<double>& scores, double q) {
  if (scores.empty()) throw ConfigError("cannot take percentile of nothing");
  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

std::vector<double> targeted_weights(
    const std::vector<std::size_t>& high_risk_set, double tau_out,
    double clip_c, std::size_t n_records) {
  if (tau_out > clip_c)
    throw InvalidTarget("tau_out exceeds clip norm C");
  if (!(tau_out > 0.0) || !(clip_c > 0.0))
    throw InvalidTarget("tau_out and C must be positive");
  std::vector<double> w(n_records, 1.0);
  for (std::size_t i : high_risk_set) {
    if (i >= n_records) throw IndexOutOfRange("high-risk index out of range");
    w[i] = tau_out / clip_c;
  }
  return w;
}

double select_gamma(const std::vector<double>& gamma_candidates,
                    const std::vector<double>& validation_tstr_by_gamma,
                    double baseline_val_tstr, double slack) {
  if (gamma_candidates.empty() ||
      gamma_candidates.size() != validation_tstr_by_gamma.size())
    throw LengthMismatch("gamma grid and TSTR values must align");
  double best = *std::min_element(gamma_candidates.begin(),
                                  gamma_candidates.end());
  bool any = false;
  for (std::size_t i = 0; i < gamma_candidates.size(); ++i) {
    if (validation_tstr_by_gamma[i] >= baseline_val_tstr - slack) {
      if (!any || gamma_candidates[i] > best) best = gamma_candidates[i];
      any = true;
    }
  }
  return best;
}

std::vector<double> shuffle_weights(const std::vector<double>& weights,
                                    std::uint64_t seed) {
  std::vector<double> out = weights;
  Rng rng = make_rng(derive_seed(seed, "shuffle_weights"));
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace reps
