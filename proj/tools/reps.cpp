#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "reps/accounting.hpp"
#include "reps/csv.hpp"
#include "reps/pipeline.hpp"
#include "reps/simulate.hpp"
#include "reps/weighting.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUserError = 1;
constexpr int kExitIoError = 2;
constexpr int kExitInvariant = 3;

std::uint64_t master_seed_or(std::uint64_t flag_value) {
  if (const char* env = std::getenv("REPS_MASTER_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return flag_value;
}

reps::Dataset load_dataset(const std::string& data_path,
                           const std::string& schema_path) {
  return reps::load_csv(data_path,
                        reps::SchemaDecl::from_json_file(schema_path));
}

void write_run_artifacts(const fs::path& dir, const reps::RunOutput& run,
                         const reps::PipelineInputs& inputs) {
  fs::create_directories(dir);
  reps::save_csv(run.synthetic, (dir / "synthetic.csv").string());
  reps::SchemaDecl decl;
  decl.schema = run.synthetic.schema;
  decl.to_json_file((dir / "synthetic.schema.json").string());

  json j;
  j["weights"] = run.stats.weights;
  j["clip_c"] = run.stats.clip_c;
  j["n"] = run.stats.n;
  j["sigma"] = run.stats.sigma;
  j["gamma"] = run.gamma;
  if (run.ledger.has_stage("scoring")) {
    j["eps_s"] = run.ledger.stage("scoring").epsilon;
    j["delta_s"] = run.ledger.stage("scoring").delta;
  }
  if (run.ledger.has_stage("synthesis")) {
    j["eps_t"] = run.ledger.stage("synthesis").epsilon;
    j["delta_t"] = run.ledger.stage("synthesis").delta;
  }
  std::vector<int> flags;
  for (bool f : run.high_risk_flags) flags.push_back(f ? 1 : 0);
  j["high_risk"] = flags;
  j["n_train"] = inputs.train.rows.size();
  std::ofstream out(dir / "run.json");
  if (!out) throw reps::IoError("cannot write run.json");
  out << j.dump(2) << "\n";
}

int cmd_simulate(std::uint64_t seed, const std::string& out_path) {
  const reps::Dataset data = reps::simulate_dataset(seed);
  reps::save_csv(data, out_path);
  reps::SchemaDecl decl;
  decl.schema = data.schema;
  decl.to_json_file(out_path + ".schema.json");
  std::cout << "wrote " << data.rows.size() << " rows to " << out_path
            << "\n";
  return kExitOk;
}

int cmd_score(const std::string& data_path, const std::string& schema_path,
              double epsilon, double gamma, double p_min, std::uint64_t seed,
              const std::string& out_path) {
  const auto raw = load_dataset(data_path, schema_path);
  const auto inputs = reps::prepare_inputs(raw, seed);
  const double delta = reps::default_delta(inputs.train.rows.size());
  const auto budgets = reps::split_budget({epsilon, delta});

  const reps::HistogramLayout layout(inputs.train.schema);
  reps::CompositionLedger ledger;
  const auto noisy =
      reps::release_histograms(inputs.train, layout, budgets.scoring, seed);
  const auto scores =
      reps::rarity_scores(noisy, inputs.train, layout, p_min);
  const double threshold = reps::score_percentile(scores.scores, 0.9);
  const auto weights =
      reps::hinge_exp_weights(scores.scores, gamma, threshold);

  std::ofstream out(out_path);
  if (!out) throw reps::IoError("cannot write '" + out_path + "'");
  out.precision(12);
  out << "record_index,score,weight\n";
  for (std::size_t i = 0; i < scores.scores.size(); ++i)
    out << i << "," << scores.scores[i] << "," << weights[i] << "\n";
  std::cout << "scored " << scores.scores.size() << " train records (eps_s="
            << budgets.scoring.epsilon << ")\n";
  return kExitOk;
}

int cmd_synthesize(const std::string& data_path,
                   const std::string& schema_path, double epsilon,
                   double gamma, double clip_c, double p_min,
                   std::uint64_t seed, const std::string& out_dir) {
  const auto raw = load_dataset(data_path, schema_path);
  const auto inputs = reps::prepare_inputs(raw, seed);
  const double delta = reps::default_delta(inputs.train.rows.size());
  const auto run =
      reps::run_reps(inputs, epsilon, delta, gamma, clip_c, p_min, seed);
  write_run_artifacts(out_dir, run, inputs);
  std::cout << "synthetic data and run artifacts written to " << out_dir
            << "\n";
  return kExitOk;
}

int cmd_attack(const std::string& synthetic_path,
               const std::string& reference_path,
               const std::string& queries_path,
               const std::string& schema_path, int k,
               const std::string& out_path) {
  const auto decl = reps::SchemaDecl::from_json_file(schema_path);
  const auto synthetic = reps::load_csv(synthetic_path, decl);
  const auto reference = reps::load_csv(reference_path, decl);
  const auto queries = reps::load_csv(queries_path, decl);
  const auto scores = reps::domias_mia(synthetic, reference, queries, k);
  std::ofstream out(out_path);
  if (!out) throw reps::IoError("cannot write '" + out_path + "'");
  out.precision(12);
  out << "query_index,score\n";
  for (std::size_t i = 0; i < scores.size(); ++i)
    out << i << "," << scores[i] << "\n";
  std::cout << "scored " << scores.size() << " queries\n";
  return kExitOk;
}

int cmd_evaluate(const std::string& synthetic_path,
                 const std::string& data_path,
                 const std::string& schema_path, std::uint64_t seed,
                 const std::string& out_path) {
  const auto decl = reps::SchemaDecl::from_json_file(schema_path);
  const auto synthetic = reps::load_csv(synthetic_path, decl);
  const auto raw = reps::load_csv(data_path, decl);
  const auto inputs = reps::prepare_inputs(raw, seed);

  const auto member_scores =
      reps::domias_mia(synthetic, inputs.reference, inputs.train);
  const auto non_member_scores =
      reps::domias_mia(synthetic, inputs.reference, inputs.non_members);
  const auto adv = reps::advantage_metrics(
      member_scores, inputs.deciles.deciles, non_member_scores);
  const auto t = reps::tstr(synthetic, inputs.test);

  json j;
  j["tstr"] = t.auroc;
  j["tstr_degenerate"] = t.degenerate;
  j["mia_adv"] = adv.overall;
  j["top10_adv"] = adv.top_decile;
  j["top_med_ratio"] = adv.inequality_ratio;
  j["per_decile_adv"] = adv.per_decile;
  std::ofstream out(out_path);
  if (!out) throw reps::IoError("cannot write '" + out_path + "'");
  out << j.dump(2) << "\n";
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_experiment(const std::string& config_path) {
  const auto config = reps::ExperimentConfig::from_json_file(config_path);
  const auto result = reps::run_grid(config);
  reps::write_grid_outputs(result, config);

  std::cout << "dataset epsilon method gamma tstr top10_adv\n";
  for (const auto& row : result.aggregate) {
    std::cout << row.dataset << " " << row.epsilon << " " << row.method << " "
              << row.gamma << " " << row.mean.tstr << " "
              << row.mean.top_decile_advantage << "\n";
  }
  std::cout << "outputs in " << config.out_dir << "\n";
  return kExitOk;
}

int cmd_audit(const std::string& run_dir) {
  const fs::path run_json = fs::path(run_dir) / "run.json";
  std::ifstream in(run_json);
  if (!in)
    throw reps::ConfigError("missing run artifact '" + run_json.string() +
                            "'");
  json j;
  in >> j;
  const auto weights = j.at("weights").get<std::vector<double>>();
  const double clip_c = j.at("clip_c").get<double>();
  const auto n = j.at("n").get<std::size_t>();
  const double sigma = j.at("sigma").get<double>();
  const double delta_t = j.at("delta_t").get<double>();
  const double eps_s = j.value("eps_s", 0.0);
  std::vector<int> high_risk = j.value("high_risk", std::vector<int>{});

  for (double w : weights)
    if (!(w > 0.0 && w <= 1.0))
      throw reps::ConfigError("tampered weight outside (0,1]: " +
                              std::to_string(w));

  const fs::path out_path = fs::path(run_dir) / "per_instance.csv";
  std::ofstream out(out_path);
  if (!out) throw reps::IoError("cannot write per-instance CSV");
  out.precision(12);
  out << "record_index,w,alpha,eps_synth,eps_total,in_high_risk_set,"
         "bound_certified\n";
  std::size_t certified = 0, checked = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double alpha = weights[i] * clip_c / static_cast<double>(n);
    const double eps_i = reps::per_instance_epsilon(weights[i], clip_c, n,
                                                    sigma, delta_t);
    int cert = -1;  // not checked (eps_i > 1: outside classical regime)
    if (eps_i <= 1.0) {
      ++checked;
      cert = reps::verify_bound(alpha, sigma, eps_i, delta_t) ? 1 : 0;
      certified += cert;
    }
    out << i << "," << weights[i] << "," << alpha << "," << eps_i << ","
        << eps_s + eps_i << ","
        << (i < high_risk.size() ? high_risk[i] : 0) << "," << cert << "\n";
  }
  std::cout << "audited " << weights.size() << " records; certified "
            << certified << "/" << checked << " rows with eps_i <= 1\n";
  if (checked != certified)
    throw reps::InvariantError("per-instance bound certification failed");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-equalized differentially private synthesis toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out = "sim.csv";
  std::string data_path, schema_path, out_dir = "run";
  std::string synthetic_path, reference_path, queries_path;
  std::string config_path, run_dir;
  double epsilon = 1.0, gamma = 1.0;
  double clip_c = reps::kDefaultClipC, p_min = reps::kDefaultPMin;
  int domias_k = reps::kDefaultDomiasK;

  auto* sim = app.add_subcommand("simulate",
                                 "Generate the simulated benchmark dataset");
  sim->add_option("--seed", seed, "Master seed")->capture_default_str();
  sim->add_option("--out", out, "Output CSV path (schema written alongside)")
      ->capture_default_str();

  auto* score = app.add_subcommand("score", "DP rarity scores and weights");
  score->add_option("--data", data_path, "Input CSV")->required();
  score->add_option("--schema", schema_path, "Schema declaration JSON")
      ->required();
  score->add_option("--epsilon", epsilon, "Total privacy budget epsilon")
      ->capture_default_str();
  score->add_option("--gamma", gamma, "Hinge-exp weight aggressiveness")
      ->capture_default_str();
  score->add_option("--p-min", p_min, "Probability floor for rarity scores")
      ->capture_default_str();
  score->add_option("--seed", seed, "Master seed")->capture_default_str();
  score->add_option("--out", out, "Output scores CSV")->capture_default_str();

  auto* synth = app.add_subcommand("synthesize",
                                   "Run the two-stage pipeline end to end");
  synth->add_option("--data", data_path, "Input CSV")->required();
  synth->add_option("--schema", schema_path, "Schema declaration JSON")
      ->required();
  synth->add_option("--epsilon", epsilon, "Total privacy budget epsilon")
      ->capture_default_str();
  synth->add_option("--gamma", gamma, "Hinge-exp weight aggressiveness")
      ->capture_default_str();
  synth->add_option("--clip-c", clip_c, "L2 clip norm C")
      ->capture_default_str();
  synth->add_option("--p-min", p_min, "Probability floor for rarity scores")
      ->capture_default_str();
  synth->add_option("--seed", seed, "Master seed")->capture_default_str();
  synth->add_option("--out-dir", out_dir, "Run artifact directory")
      ->capture_default_str();

  auto* attack = app.add_subcommand("attack",
                                    "Distance-ratio membership attack");
  attack->add_option("--synthetic", synthetic_path, "Synthetic CSV")
      ->required();
  attack->add_option("--reference", reference_path, "Reference CSV")
      ->required();
  attack->add_option("--queries", queries_path, "Query CSV")->required();
  attack->add_option("--schema", schema_path, "Schema declaration JSON")
      ->required();
  attack->add_option("--domias-k", domias_k, "kNN size for distance ratios")
      ->capture_default_str();
  attack->add_option("--out", out, "Output scores CSV")
      ->capture_default_str();

  auto* eval = app.add_subcommand("evaluate",
                                  "Utility and attack metrics for a "
                                  "synthetic dataset");
  eval->add_option("--synthetic", synthetic_path, "Synthetic CSV")
      ->required();
  eval->add_option("--data", data_path, "Original CSV")->required();
  eval->add_option("--schema", schema_path, "Schema declaration JSON")
      ->required();
  eval->add_option("--seed", seed, "Master seed")->capture_default_str();
  eval->add_option("--out", out, "Output metrics JSON")
      ->capture_default_str();

  auto* exp = app.add_subcommand("experiment", "Run the full grid");
  exp->add_option("--config", config_path, "Experiment config JSON")
      ->required();

  auto* audit = app.add_subcommand("audit",
                                   "Per-instance privacy report for a run");
  audit->add_option("--run-dir", run_dir, "Run artifact directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUserError;
  }

  try {
    seed = master_seed_or(seed);
    if (sim->parsed()) return cmd_simulate(seed, out);
    if (score->parsed())
      return cmd_score(data_path, schema_path, epsilon, gamma, p_min, seed,
                       out);
    if (synth->parsed())
      return cmd_synthesize(data_path, schema_path, epsilon, gamma, clip_c,
                            p_min, seed, out_dir);
    if (attack->parsed())
      return cmd_attack(synthetic_path, reference_path, queries_path,
                        schema_path, domias_k, out);
    if (eval->parsed())
      return cmd_evaluate(synthetic_path, data_path, schema_path, seed, out);
    if (exp->parsed()) return cmd_experiment(config_path);
    if (audit->parsed()) return cmd_audit(run_dir);
  } catch (const reps::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const reps::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const reps::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUserError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUserError;
  }
  return kExitUserError;
}
