#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "spam/cli.hpp"

namespace {

using spam::cli::RunConfig;

long long oracle_cap_from_env() {
  if (const char* cap = std::getenv("SPAM_ORACLE_CAP")) {
    try {
      return std::stoll(cap);
    } catch (...) {
      spam::fail("config", "SPAM_ORACLE_CAP is not an integer");
    }
  }
  return spam::kDefaultOracleCap;
}

RunConfig load_config(const std::string& path, const std::string& out_override,
                      long long seed_override, int epochs_override) {
  RunConfig cfg = RunConfig::from_json_file(path);
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (seed_override >= 0) cfg.train.seed = static_cast<std::uint64_t>(seed_override);
  if (epochs_override > 0) {
    cfg.train.epochs = epochs_override;
    cfg.epochs_explicit = true;
  }
  return cfg;
}

spam::Vector parse_vector(const std::string& csv) {
  std::vector<double> vals;
  std::string tok;
  std::istringstream ss(csv);
  while (std::getline(ss, tok, ',')) {
    try {
      vals.push_back(std::stod(tok));
    } catch (...) {
      spam::fail("config", "cannot parse input value '" + tok + "'");
    }
  }
  spam::Vector x(static_cast<spam::Index>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) x[static_cast<spam::Index>(i)] = vals[i];
  return x;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scalable polynomial additive models: train, evaluate and explain"};
  app.require_subcommand(1);

  std::string config_path, out_dir, model_path, split = "test", input_csv, space_path;
  long long seed = -1;
  int epochs = 0, threads = 1, row = -1, class_index = 0, top_terms = 7;
  int max_d = 6, max_k = 3, trials = 200, n_trials = 1;
  bool corrupt = false;

  auto* tr = app.add_subcommand("train", "train a model from a config recipe");
  tr->add_option("--config", config_path, "config JSON")->required();
  tr->add_option("--out", out_dir, "output directory (overrides config)");
  tr->add_option("--seed", seed, "training seed (overrides config)");
  tr->add_option("--epochs", epochs, "epoch count (overrides config)");

  auto* ev = app.add_subcommand("eval", "recompute metrics for a saved model");
  ev->add_option("--model", model_path, "model JSON")->required();
  ev->add_option("--config", config_path, "config JSON")->required();
  ev->add_option("--split", split, "train|val|test");

  auto* ex = app.add_subcommand("explain", "per-term contributions for one input");
  ex->add_option("--model", model_path, "model JSON")->required();
  ex->add_option("--input", input_csv, "comma-separated normalized features");
  ex->add_option("--config", config_path, "config JSON (with --row)");
  ex->add_option("--row", row, "row of the dataset split");
  ex->add_option("--split", split, "train|val|test");
  ex->add_option("--class", class_index, "class index");
  ex->add_option("--top", top_terms, "terms to list before the residual row");

  auto* vf = app.add_subcommand("verify", "oracle equivalence and gradient checks");
  vf->add_option("--max-d", max_d, "max feature count");
  vf->add_option("--max-k", max_k, "max degree");
  vf->add_option("--trials", trials, "random instances");
  vf->add_option("--seed", seed, "rng seed");
  vf->add_flag("--corrupt", corrupt, "test hook: inject a forward defect");

  auto* sp = app.add_subcommand("spectra", "singular-value spectra and decay fit");
  sp->add_option("--model", model_path, "model JSON")->required();
  sp->add_option("--out", out_dir, "output directory")->required();

  auto* se = app.add_subcommand("search", "random hyperparameter search");
  se->add_option("--space", space_path, "search space JSON")->required();
  se->add_option("--config", config_path, "base config JSON")->required();
  se->add_option("--trials", n_trials, "number of trials")->required();
  se->add_option("--threads", threads, "parallel trials");
  se->add_option("--seed", seed, "master seed");
  se->add_option("--out", out_dir, "output directory (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*tr) {
      return spam::cli::cmd_train(load_config(config_path, out_dir, seed, epochs), std::cout);
    }
    if (*ev) {
      return spam::cli::cmd_eval(model_path, load_config(config_path, "", -1, 0), split,
                                 std::cout);
    }
    if (*ex) {
      spam::cli::ExplainRequest req;
      req.model_path = model_path;
      if (!input_csv.empty()) req.input = parse_vector(input_csv);
      if (row >= 0) {
        req.row = row;
        req.config = load_config(config_path, "", -1, 0);
      }
      req.split = split;
      req.class_index = class_index;
      req.top_terms = top_terms;
      return spam::cli::cmd_explain(req, std::cout);
    }
    if (*vf) {
      spam::VerifyOptions opts;
      opts.max_d = max_d;
      opts.max_k = max_k;
      opts.trials = trials;
      opts.seed = seed >= 0 ? static_cast<std::uint64_t>(seed) : 1;
      opts.corrupt_forward = corrupt;
      opts.oracle_cap = oracle_cap_from_env();
      return spam::cli::cmd_verify(opts, std::cout);
    }
    if (*sp) {
      return spam::cli::cmd_spectra(model_path, out_dir, std::cout);
    }
    if (*se) {
      RunConfig cfg = load_config(config_path, out_dir, -1, 0);
      return spam::cli::cmd_search(space_path, cfg, n_trials, threads,
                                   seed >= 0 ? static_cast<std::uint64_t>(seed) : 0, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return spam::cli::emit_error(e, std::cout);
  }
  return 1;
}
