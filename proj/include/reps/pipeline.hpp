#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reps/accounting.hpp"
#include "reps/dataset.hpp"
#include "reps/dp.hpp"
#include "reps/evaluation.hpp"
#include "reps/scoring.hpp"
#include "reps/synthesis.hpp"

namespace reps {

struct ExperimentConfig {
  std::string dataset = "sim";       // "sim" or a CSV path
  std::string schema_path;           // sidecar schema for CSV datasets
  std::string dataset_name = "sim";  // label used in output rows
  std::vector<double> epsilons = {0.5, 1.0, 2.0, 4.0};
  std::vector<std::string> methods = {"non_private",     "dp_uniform_full",
                                      "dp_uniform_split", "reps",
                                      "random_downweight", "hard_removal"};
  std::vector<double> gamma_candidates = {0.5, 1.0, 2.0, 4.0};
  double clip_c = kDefaultClipC;
  double p_min = kDefaultPMin;
  int seeds = 5;
  int knn_k = kDefaultKnnK;
  int domias_k = kDefaultDomiasK;
  std::uint64_t master_seed = 0;
  std::string out_dir = "results";

  static ExperimentConfig from_json_file(const std::string& path);
};

// Standardized splits and attack pools for one (dataset, seed) cell. The
// test split is partitioned 50/50 into a DOMIAS reference set and the
// non-member query pool so no record serves as both.
struct PipelineInputs {
  Dataset train;       // standardized
  Dataset validation;  // standardized with train params
  Dataset test;
  Dataset reference;
  Dataset non_members;
  DecileAssignment deciles;  // kNN oracle on the train split
  int knn_k = kDefaultKnnK;
  int domias_k = kDefaultDomiasK;
};

PipelineInputs prepare_inputs(const Dataset& raw, std::uint64_t seed,
                              int knn_k = kDefaultKnnK,
                              int domias_k = kDefaultDomiasK);

struct MetricsReport {
  double tstr = 0.5;
  bool tstr_degenerate = false;
  double mia_advantage = 0.0;
  double top_decile_advantage = 0.0;
  double inequality_ratio = 0.0;
  std::vector<double> per_decile_advantage;
  double scorer_spearman = 0.0;
  double scorer_recall_top10 = 0.0;
};

struct RunOutput {
  Dataset synthetic;
  MetricsReport metrics;
  CompositionLedger ledger;
  NoisyStats stats;
  std::vector<double> dp_scores;  // empty for methods without scoring
  std::vector<bool> high_risk_flags;
  double gamma = 0.0;
};

// Full REPS pipeline on prepared inputs: budget split, DP histogram
// scoring, hinge-exp weights at the 90th-percentile threshold, weighted
// release, Naive Bayes fit, sampling, evaluation.
RunOutput run_reps(const PipelineInputs& inputs, double epsilon, double delta,
                   double gamma, double clip_c, double p_min,
                   std::uint64_t seed);

// kind: non_private | dp_uniform_full | dp_uniform_split |
// random_downweight | hard_removal.
RunOutput run_baseline(const std::string& kind, const PipelineInputs& inputs,
                       double epsilon, double delta, double gamma,
                       double clip_c, double p_min, std::uint64_t seed);

struct GridCell {
  std::string dataset;
  double epsilon = 0.0;
  std::string method;
  int seed_index = 0;
  double gamma = 0.0;
  std::optional<MetricsReport> metrics;  // empty on per-cell failure
  std::string error;
};

struct GridResult {
  std::vector<GridCell> cells;
  std::map<std::string, double> selected_gamma;  // key: epsilon string

  // Mean over seeds; keyed (epsilon, method) in grid order.
  struct AggregateRow {
    std::string dataset;
    double epsilon = 0.0;
    std::string method;
    double gamma = 0.0;
    MetricsReport mean;
    int runs = 0;
  };
  std::vector<AggregateRow> aggregate;
};

GridResult run_grid(const ExperimentConfig& config);

// results.csv plus plot-ready curves; creates the directory if needed.
void write_grid_outputs(const GridResult& result,
                        const ExperimentConfig& config);

}  // namespace reps
