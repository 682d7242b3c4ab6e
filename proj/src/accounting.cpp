#include "reps/accounting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace reps {

double influence(const Dataset& records, const std::vector<double>& weights,
                 double clip_c, std::size_t i) {
  if (i >= records.rows.size())
    throw IndexOutOfRange("record index " + std::to_string(i) +
                          " out of range");
  if (weights.size() != records.rows.size())
    throw LengthMismatch("weights and records differ in length");
  const StatEncoding enc(records.schema);
  const auto full = weighted_aggregate(records, weights, clip_c, enc);

  // Null record: drop record i but keep the normalization by n.
  Dataset without = records;
  std::vector<double> w = weights;
  without.rows.erase(without.rows.begin() + static_cast<std::ptrdiff_t>(i));
  w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
  const auto reduced = weighted_aggregate(without, w, clip_c, enc,
                                          records.rows.size());
  double ss = 0.0;
  for (std::size_t k = 0; k < full.size(); ++k) {
    const double d = full[k] - reduced[k];
    ss += d * d;
  }
  return std::sqrt(ss);
}

double per_instance_epsilon(double weight, double clip_c, std::size_t n,
                            double sigma, double delta_t) {
  if (!(sigma > 0.0)) throw InvalidBudget("sigma must be positive");
  return weight * clip_c / (static_cast<double>(n) * sigma) *
         std::sqrt(2.0 * std::log(1.25 / delta_t));
}

PerInstanceReport end_to_end(const Dataset& records, const NoisyStats& stats,
                             const CompositionLedger& ledger,
                             const std::vector<bool>& high_risk_flags) {
  if (!ledger.has_stage("scoring") || !ledger.has_stage("synthesis"))
    throw MissingStage("ledger must contain scoring and synthesis stages");
  const PrivacyBudget scoring = ledger.stage("scoring");
  const PrivacyBudget synthesis = ledger.stage("synthesis");

  PerInstanceReport report;
  report.epsilon_scoring = scoring.epsilon;
  report.epsilon_synthesis_global = synthesis.epsilon;
  report.delta_total = scoring.delta + synthesis.delta;

  const StatEncoding enc(records.schema);
  const double noise_factor = std::sqrt(2.0 * std::log(1.25 / synthesis.delta));
  std::vector<double> totals;
  for (std::size_t i = 0; i < records.rows.size(); ++i) {
    PerInstanceReport::Row row;
    row.record_index = i;
    row.weight = stats.weights[i];
    row.epsilon_synth = per_instance_epsilon(row.weight, stats.clip_c,
                                             stats.n, stats.sigma,
                                             synthesis.delta);
    // Data-dependent influence via the exact closed form; identical to
    // re-aggregation (see influence()) but O(k) per record.
    double norm2 = 0.0;
    for (double v : clip(enc.encode(records.rows[i]), stats.clip_c))
      norm2 += v * v;
    row.influence = row.weight * std::sqrt(norm2) /
                    static_cast<double>(stats.n);
    row.epsilon_synth_data_dependent =
        row.influence / stats.sigma * noise_factor;
    row.epsilon_total = scoring.epsilon + row.epsilon_synth;
    row.in_high_risk_set =
        i < high_risk_flags.size() && high_risk_flags[i];
    totals.push_back(row.epsilon_total);
    if (row.epsilon_total > report.max_epsilon_total)
      report.max_epsilon_total = row.epsilon_total;
    if (row.in_high_risk_set)
      report.max_epsilon_high_risk =
          std::max(report.max_epsilon_high_risk, row.epsilon_total);
    report.rows.push_back(std::move(row));
  }
  if (!totals.empty()) {
    std::sort(totals.begin(), totals.end());
    const std::size_t n = totals.size();
    report.median_epsilon_total =
        n % 2 == 1 ? totals[n / 2]
                   : 0.5 * (totals[n / 2 - 1] + totals[n / 2]);
  }
  return report;
}

bool verify_bound(double influence_alpha, double sigma, double epsilon_i,
                  double delta_t) {
  return hockey_stick_delta(influence_alpha, sigma, epsilon_i) <= delta_t;
}

void write_report_csv(const PerInstanceReport& report,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.precision(12);
  out << "record_index,w,alpha,eps_synth,eps_total,in_high_risk_set\n";
  for (const auto& row : report.rows) {
    out << row.record_index << "," << row.weight << "," << row.influence
        << "," << row.epsilon_synth << "," << row.epsilon_total << ","
        << (row.in_high_risk_set ? 1 : 0) << "\n";
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace reps
