#pragma once

#include <string>
#include <vector>

#include "reps/dataset.hpp"
#include "reps/dp.hpp"
#include "reps/synthesis.hpp"

namespace reps {

// Per-record privacy accounting for one experiment run. `epsilon_synth` is
// the closed-form bound w_i C / (n sigma) * sqrt(2 ln(1.25/delta_t));
// `epsilon_synth_data_dependent` uses the actual influence alpha_i, which is
// tighter for records whose encoding never hits the clip norm.
struct PerInstanceReport {
  struct Row {
    std::size_t record_index = 0;
    double weight = 1.0;
    double influence = 0.0;
    double epsilon_synth = 0.0;
    double epsilon_synth_data_dependent = 0.0;
    double epsilon_total = 0.0;
    bool in_high_risk_set = false;
  };
  std::vector<Row> rows;
  double epsilon_scoring = 0.0;
  double epsilon_synthesis_global = 0.0;
  double delta_total = 0.0;
  double max_epsilon_total = 0.0;
  double max_epsilon_high_risk = 0.0;  // 0 when the set is empty
  double median_epsilon_total = 0.0;   // informational inequality summary
};

// alpha_i by actual re-aggregation with record i replaced by the null
// record.
double influence(const Dataset& records, const std::vector<double>& weights,
                 double clip_c, std::size_t i);

// Closed-form synthesis-stage bound: w_i C / (n sigma) * sqrt(2 ln(1.25/dt)).
double per_instance_epsilon(double weight, double clip_c, std::size_t n,
                            double sigma, double delta_t);

PerInstanceReport end_to_end(const Dataset& records, const NoisyStats& stats,
                             const CompositionLedger& ledger,
                             const std::vector<bool>& high_risk_flags = {});

// Numeric certification: the claimed (eps_i, delta_t) pair holds iff the
// hockey-stick divergence of the two-Gaussian pair at distance alpha_i does
// not exceed delta_t.
bool verify_bound(double influence_alpha, double sigma, double epsilon_i,
                  double delta_t);

void write_report_csv(const PerInstanceReport& report,
                      const std::string& path);

}  // namespace reps
