#include "reps/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reps/csv.hpp"
#include "reps/simulate.hpp"
#include "reps/weighting.hpp"

namespace reps {

namespace {

using nlohmann::json;

// Stratified 50/50 partition of the test split into reference and
// non-member query pools.
std::pair<Dataset, Dataset> partition_test(const Dataset& test,
                                           std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> by_class(2);
  for (std::size_t i = 0; i < test.rows.size(); ++i)
    by_class[test.rows[i].label].push_back(i);
  Rng rng = make_rng(derive_seed(seed, "test_partition"));
  std::vector<std::size_t> ref_idx, query_idx;
  for (auto& pool : by_class) {
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::size_t half = pool.size() / 2;
    for (std::size_t k = 0; k < pool.size(); ++k)
      (k < half ? ref_idx : query_idx).push_back(pool[k]);
  }
  std::sort(ref_idx.begin(), ref_idx.end());
  std::sort(query_idx.begin(), query_idx.end());
  return {subset(test, ref_idx), subset(test, query_idx)};
}

MetricsReport evaluate_run(const PipelineInputs& inputs,
                           const Dataset& synthetic,
                           const std::vector<double>& dp_scores) {
  MetricsReport m;
  // The reported advantage figures use the distance-to-synthetic attack;
  // the reference-ratio attack is available separately via the CLI.
  const auto member_scores = distance_mia(synthetic, inputs.train);
  const auto non_member_scores = distance_mia(synthetic, inputs.non_members);
  const auto adv = advantage_metrics(member_scores, inputs.deciles.deciles,
                                     non_member_scores);
  m.mia_advantage = adv.overall;
  m.top_decile_advantage = adv.top_decile;
  m.inequality_ratio = adv.inequality_ratio;
  m.per_decile_advantage = adv.per_decile;

  const auto t = tstr(synthetic, inputs.test);
  m.tstr = t.auroc;
  m.tstr_degenerate = t.degenerate;

  if (!dp_scores.empty()) {
    const auto q = scorer_quality(dp_scores, inputs.deciles.knn_scores);
    m.scorer_spearman = q.spearman;
    m.scorer_recall_top10 = q.recall_at_top10;
  }
  return m;
}

struct ScoringStage {
  RiskScores scores;
  std::vector<bool> high_risk_flags;
  double threshold = 0.0;
};

ScoringStage run_scoring(const PipelineInputs& inputs,
                         const PrivacyBudget& budget, double p_min,
                         std::uint64_t seed, CompositionLedger& ledger) {
  const HistogramLayout layout(inputs.train.schema);
  const auto noisy = release_histograms(inputs.train, layout, budget, seed);
  ledger.record("scoring", budget);
  ScoringStage stage;
  stage.scores = rarity_scores(noisy, inputs.train, layout, p_min);
  stage.threshold = score_percentile(stage.scores.scores, 0.9);
  stage.high_risk_flags.assign(inputs.train.rows.size(), false);
  for (std::size_t i : top_fraction_indices(stage.scores.scores, 0.1))
    stage.high_risk_flags[i] = true;
  return stage;
}

RunOutput finish_run(const PipelineInputs& inputs, RunOutput out,
                     std::uint64_t seed) {
  out.synthetic = sample(fit_model(out.stats, inputs.train.schema),
                         inputs.train.schema, inputs.train.rows.size(), seed);
  out.metrics = evaluate_run(inputs, out.synthetic, out.dp_scores);
  return out;
}

}  // namespace

PipelineInputs prepare_inputs(const Dataset& raw, std::uint64_t seed,
                              int knn_k, int domias_k) {
  const auto assignment = split(raw, seed);
  const auto [standardized, params] = standardize(raw, assignment);
  PipelineInputs inputs;
  inputs.knn_k = knn_k;
  inputs.domias_k = domias_k;
  inputs.train = subset(standardized, assignment.indices(Split::kTrain));
  inputs.validation =
      subset(standardized, assignment.indices(Split::kValidation));
  inputs.test = subset(standardized, assignment.indices(Split::kTest));
  std::tie(inputs.reference, inputs.non_members) =
      partition_test(inputs.test, seed);
  inputs.deciles = knn_outlier_deciles(inputs.train, knn_k);
  return inputs;
}

RunOutput run_reps(const PipelineInputs& inputs, double epsilon, double delta,
                   double gamma, double clip_c, double p_min,
                   std::uint64_t seed) {
  RunOutput out;
  out.gamma = gamma;
  const BudgetSplit budgets = split_budget({epsilon, delta});
  const auto scoring =
      run_scoring(inputs, budgets.scoring, p_min, seed, out.ledger);
  out.dp_scores = scoring.scores.scores;
  out.high_risk_flags = scoring.high_risk_flags;

  const auto weights = hinge_exp_weights(out.dp_scores, gamma,
                                         scoring.threshold);
  out.stats = release_stats(inputs.train, weights, clip_c, budgets.synthesis,
                            seed, &out.ledger);
  return finish_run(inputs, std::move(out), seed);
}

RunOutput run_baseline(const std::string& kind, const PipelineInputs& inputs,
                       double epsilon, double delta, double gamma,
                       double clip_c, double p_min, std::uint64_t seed) {
  RunOutput out;
  const std::size_t n = inputs.train.rows.size();
  const std::vector<double> uniform(n, 1.0);
  const StatEncoding encoding(inputs.train.schema);

  if (kind == "non_private") {
    out.stats.values =
        weighted_aggregate(inputs.train, uniform, clip_c, encoding);
    out.stats.sigma = 0.0;
    out.stats.clip_c = clip_c;
    out.stats.n = n;
    out.stats.weights = uniform;
    return finish_run(inputs, std::move(out), seed);
  }
  if (kind == "dp_uniform_full") {
    out.stats = release_stats(inputs.train, uniform, clip_c,
                              {epsilon, delta}, seed, &out.ledger);
    return finish_run(inputs, std::move(out), seed);
  }
  if (kind == "dp_uniform_split") {
    // Matched-noise baseline: the scoring share is reserved (and charged in
    // the ledger) but no scoring release happens.
    const BudgetSplit budgets = split_budget({epsilon, delta});
    out.ledger.record("scoring", budgets.scoring);
    out.stats = release_stats(inputs.train, uniform, clip_c,
                              budgets.synthesis, seed, &out.ledger);
    return finish_run(inputs, std::move(out), seed);
  }
  if (kind == "random_downweight") {
    const BudgetSplit budgets = split_budget({epsilon, delta});
    const auto scoring =
        run_scoring(inputs, budgets.scoring, p_min, seed, out.ledger);
    out.dp_scores = scoring.scores.scores;
    out.gamma = gamma;
    const auto weights = shuffle_weights(
        hinge_exp_weights(out.dp_scores, gamma, scoring.threshold), seed);
    out.stats = release_stats(inputs.train, weights, clip_c,
                              budgets.synthesis, seed, &out.ledger);
    return finish_run(inputs, std::move(out), seed);
  }
  if (kind == "hard_removal") {
    const BudgetSplit budgets = split_budget({epsilon, delta});
    const auto scoring =
        run_scoring(inputs, budgets.scoring, p_min, seed, out.ledger);
    out.dp_scores = scoring.scores.scores;
    out.high_risk_flags = scoring.high_risk_flags;
    auto result = hard_removal_synthesis(inputs.train, out.dp_scores,
                                         budgets.synthesis, clip_c, seed,
                                         &out.ledger);
    out.stats = std::move(result.stats);
    out.synthetic = std::move(result.synthetic);
    out.metrics = evaluate_run(inputs, out.synthetic, out.dp_scores);
    return out;
  }
  throw UnknownKind("unknown baseline kind '" + kind + "'");
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("invalid config JSON: " + std::string(e.what()));
  }
  ExperimentConfig c;
  c.dataset = j.value("dataset", c.dataset);
  c.schema_path = j.value("schema", c.schema_path);
  c.dataset_name = j.value("dataset_name",
                           c.dataset == "sim" ? "sim" : c.dataset);
  if (j.contains("epsilons"))
    c.epsilons = j["epsilons"].get<std::vector<double>>();
  if (j.contains("methods"))
    c.methods = j["methods"].get<std::vector<std::string>>();
  if (j.contains("gamma_candidates"))
    c.gamma_candidates = j["gamma_candidates"].get<std::vector<double>>();
  c.clip_c = j.value("clip_c", c.clip_c);
  c.p_min = j.value("p_min", c.p_min);
  c.seeds = j.value("seeds", c.seeds);
  c.knn_k = j.value("knn_k", c.knn_k);
  c.domias_k = j.value("domias_k", c.domias_k);
  c.master_seed = j.value("master_seed", c.master_seed);
  c.out_dir = j.value("out_dir", c.out_dir);
  if (c.epsilons.empty() || c.methods.empty())
    throw ConfigError("epsilon grid and method list must be non-empty");
  for (double eps : c.epsilons)
    if (eps <= 0.0) throw ConfigError("epsilons must be positive");
  if (c.clip_c <= 0.0) throw ConfigError("clip_c must be positive");
  if (c.seeds < 1) throw ConfigError("seeds must be >= 1");
  return c;
}

namespace {

Dataset load_grid_dataset(const ExperimentConfig& config,
                          std::uint64_t data_seed) {
  if (config.dataset == "sim") return simulate_dataset(data_seed);
  if (config.schema_path.empty())
    throw ConfigError("CSV dataset requires a schema declaration");
  return load_csv(config.dataset,
                  SchemaDecl::from_json_file(config.schema_path));
}

bool needs_gamma(const std::string& method) {
  return method == "reps" || method == "random_downweight" ||
         method == "hard_removal";
}

}  // namespace

GridResult run_grid(const ExperimentConfig& config) {
  GridResult result;

  // Gamma is selected once per epsilon on a dedicated tuning seed, using
  // the dp_uniform_full validation TSTR as the 0.02-slack baseline. The
  // tuning evaluates validation-split TSTR only.
  std::map<std::string, double> selected;
  {
    const std::uint64_t tune_seed =
        derive_seed(config.master_seed, "gamma_tuning");
    const Dataset raw = load_grid_dataset(config, tune_seed);
    const auto inputs =
        prepare_inputs(raw, tune_seed, config.knn_k, config.domias_k);
    const double delta = default_delta(inputs.train.rows.size());
    for (double eps : config.epsilons) {
      auto baseline = run_baseline("dp_uniform_full", inputs, eps, delta, 0.0,
                                   config.clip_c, config.p_min, tune_seed);
      const double baseline_val =
          tstr(baseline.synthetic, inputs.validation).auroc;
      std::vector<double> val_tstr;
      for (double g : config.gamma_candidates) {
        auto run = run_reps(inputs, eps, delta, g, config.clip_c,
                            config.p_min, tune_seed);
        val_tstr.push_back(tstr(run.synthetic, inputs.validation).auroc);
      }
      selected[std::to_string(eps)] =
          select_gamma(config.gamma_candidates, val_tstr, baseline_val);
    }
  }
  result.selected_gamma = selected;

  for (int s = 0; s < config.seeds; ++s) {
    const std::uint64_t cell_base =
        derive_seed(config.master_seed, config.dataset_name,
                    static_cast<std::uint64_t>(s));
    const Dataset raw = load_grid_dataset(config, cell_base);
    const auto inputs =
        prepare_inputs(raw, cell_base, config.knn_k, config.domias_k);
    const double delta = default_delta(inputs.train.rows.size());

    for (double eps : config.epsilons) {
      for (const auto& method : config.methods) {
        GridCell cell;
        cell.dataset = config.dataset_name;
        cell.epsilon = eps;
        cell.method = method;
        cell.seed_index = s;
        cell.gamma = needs_gamma(method) ? selected[std::to_string(eps)] : 0.0;
        const std::uint64_t run_seed = derive_seed(
            cell_base, method, static_cast<std::uint64_t>(eps * 1000));
        try {
          RunOutput out =
              method == "reps"
                  ? run_reps(inputs, eps, delta, cell.gamma, config.clip_c,
                             config.p_min, run_seed)
                  : run_baseline(method, inputs, eps, delta, cell.gamma,
                                 config.clip_c, config.p_min, run_seed);
          if (!out.ledger.entries().empty() &&
              out.ledger.total_epsilon() > eps * (1.0 + 1e-9))
            throw InvariantError("ledger epsilon exceeds configured budget");
          cell.metrics = std::move(out.metrics);
        } catch (const std::exception& e) {
          cell.error = e.what();
        }
        result.cells.push_back(std::move(cell));
      }
    }
  }

  // Aggregate: arithmetic mean over seeds of every metric.
  for (double eps : config.epsilons) {
    for (const auto& method : config.methods) {
      GridResult::AggregateRow row;
      row.dataset = config.dataset_name;
      row.epsilon = eps;
      row.method = method;
      row.mean.tstr = 0.0;  // accumulator; the struct default is 0.5
      for (const auto& cell : result.cells) {
        if (cell.epsilon != eps || cell.method != method || !cell.metrics)
          continue;
        const auto& m = *cell.metrics;
        row.gamma = cell.gamma;
        row.mean.tstr += m.tstr;
        row.mean.mia_advantage += m.mia_advantage;
        row.mean.top_decile_advantage += m.top_decile_advantage;
        row.mean.inequality_ratio += m.inequality_ratio;
        row.mean.scorer_spearman += m.scorer_spearman;
        row.mean.scorer_recall_top10 += m.scorer_recall_top10;
        ++row.runs;
      }
      if (row.runs > 0) {
        const double r = static_cast<double>(row.runs);
        row.mean.tstr /= r;
        row.mean.mia_advantage /= r;
        row.mean.top_decile_advantage /= r;
        row.mean.inequality_ratio /= r;
        row.mean.scorer_spearman /= r;
        row.mean.scorer_recall_top10 /= r;
      }
      result.aggregate.push_back(std::move(row));
    }
  }
  return result;
}

void write_grid_outputs(const GridResult& result,
                        const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);

  auto write_atomic = [](const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp);
      if (!out) throw IoError("cannot write '" + tmp.string() + "'");
      out << content;
    }
    fs::rename(tmp, path);
  };

  std::ostringstream csv;
  csv.precision(6);
  csv << std::fixed;
  csv << "dataset,epsilon,method,gamma,tstr,mia_adv,top10_adv,top_med_ratio,"
         "spearman,recall_top10\n";
  for (const auto& row : result.aggregate) {
    csv << row.dataset << "," << row.epsilon << "," << row.method << ","
        << row.gamma << "," << row.mean.tstr << "," << row.mean.mia_advantage
        << "," << row.mean.top_decile_advantage << ","
        << row.mean.inequality_ratio << "," << row.mean.scorer_spearman << ","
        << row.mean.scorer_recall_top10 << "\n";
  }
  write_atomic(fs::path(config.out_dir) / "results.csv", csv.str());

  // Plot-ready curves: utility vs epsilon and top-decile advantage vs
  // epsilon, one column per method.
  auto curve = [&](auto metric_of) {
    std::ostringstream out;
    out.precision(6);
    out << std::fixed;
    out << "epsilon";
    for (const auto& m : config.methods) out << "," << m;
    out << "\n";
    for (double eps : config.epsilons) {
      out << eps;
      for (const auto& m : config.methods) {
        for (const auto& row : result.aggregate)
          if (row.epsilon == eps && row.method == m) out << ","
                                                         << metric_of(row);
      }
      out << "\n";
    }
    return out.str();
  };
  write_atomic(fs::path(config.out_dir) / "utility_vs_epsilon.csv",
               curve([](const GridResult::AggregateRow& r) {
                 return r.mean.tstr;
               }));
  write_atomic(fs::path(config.out_dir) / "top_decile_adv_vs_epsilon.csv",
               curve([](const GridResult::AggregateRow& r) {
                 return r.mean.top_decile_advantage;
               }));

  // Per-cell report (includes error rows).
  json cells = json::array();
  for (const auto& cell : result.cells) {
    json c;
    c["dataset"] = cell.dataset;
    c["epsilon"] = cell.epsilon;
    c["method"] = cell.method;
    c["seed_index"] = cell.seed_index;
    c["gamma"] = cell.gamma;
    if (cell.metrics) {
      c["tstr"] = cell.metrics->tstr;
      c["mia_adv"] = cell.metrics->mia_advantage;
      c["top10_adv"] = cell.metrics->top_decile_advantage;
      c["top_med_ratio"] = cell.metrics->inequality_ratio;
      c["per_decile_adv"] = cell.metrics->per_decile_advantage;
      c["spearman"] = cell.metrics->scorer_spearman;
      c["recall_top10"] = cell.metrics->scorer_recall_top10;
    } else {
      c["error"] = cell.error;
    }
    cells.push_back(c);
  }
  json report;
  report["cells"] = cells;
  report["selected_gamma"] = result.selected_gamma;
  write_atomic(fs::path(config.out_dir) / "runs.json", report.dump(2) + "\n");
}

}  // namespace reps
