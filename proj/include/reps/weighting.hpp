#pragma once

#include <cstdint>
#include <vector>

#include "reps/errors.hpp"

namespace reps {

// w_i = min(1, tau / (s_i + tau)); gradual protection.
std::vector<double> cap_weights(const std::vector<double>& scores, double tau);

// w_i = exp(-gamma * max(s_i - t, 0)); sharp protection above threshold t.
std::vector<double> hinge_exp_weights(const std::vector<double>& scores,
                                      double gamma, double threshold);

// Linear-interpolated quantile of the released scores; used for the
// 90th-percentile hinge threshold (post-processing, no extra budget).
double score_percentile(const std::vector<double>& scores, double q);

// w_i = tau_out / C on the high-risk set, 1 elsewhere.
std::vector<double> targeted_weights(
    const std::vector<std::size_t>& high_risk_set, double tau_out,
    double clip_c, std::size_t n_records);

// Largest gamma whose validation TSTR stays within `slack` (0.02) of the
// baseline; falls back to the smallest candidate when none qualifies.
double select_gamma(const std::vector<double>& gamma_candidates,
                    const std::vector<double>& validation_tstr_by_gamma,
                    double baseline_val_tstr, double slack = 0.02);

// Uniformly random permutation of the weight multiset (ablation).
std::vector<double> shuffle_weights(const std::vector<double>& weights,
                                    std::uint64_t seed);

}  // namespace reps
