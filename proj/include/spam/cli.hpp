#pragma once

#include <optional>

#include <nlohmann/json.hpp>

#include "spam/dataset.hpp"
#include "spam/search.hpp"
#include "spam/train.hpp"
#include "spam/verify.hpp"

namespace spam::cli {

// Experiment recipe: JSON config file with optional flag overrides. See
// README for the documented schema.
struct RunConfig {
  std::string dataset_name;  // used for per-dataset epoch defaults
  std::string csv_path;
  std::string schema_path;
  std::uint64_t split_seed = 0;

  int degree = 1;
  std::vector<int> ranks;  // [r_2, ..., r_k]
  bool neural = false;
  std::string arch = "deep";
  int subnets = 1;
  bool tied = false;

  TrainConfig train;
  bool epochs_explicit = false;
  std::string loss_name = "auto";

  std::string out_dir = "out";

  static RunConfig from_json_file(const std::string& path);
  nlohmann::json to_json() const;
};

// Shared plumbing --------------------------------------------------------

DatasetSplit load_dataset(const RunConfig& cfg);

// Resolves the loss kind / class count / epoch defaults against the data and
// builds the randomly initialized model for this recipe.
struct PreparedRun {
  DatasetSplit data;
  SpamModel model;
  TrainConfig train;
};
PreparedRun prepare_run(const RunConfig& cfg);

// Commands ----------------------------------------------------------------
// Every command returns a process exit code: 0 success, 2 on io errors,
// 1 otherwise. Machine-readable output goes to `out` (stdout in the binary);
// diagnostics go to stderr.

int cmd_train(const RunConfig& cfg, std::ostream& out);

int cmd_eval(const std::string& model_path, const RunConfig& cfg, const std::string& split,
             std::ostream& out);

struct ExplainRequest {
  std::string model_path;
  std::optional<Vector> input;     // explicit normalized feature vector
  std::optional<int> row;          // alternatively: row of a dataset split
  std::string split = "test";
  int class_index = 0;
  int top_terms = 7;
  std::optional<RunConfig> config;  // needed with `row`
};
int cmd_explain(const ExplainRequest& req, std::ostream& out);

int cmd_verify(const VerifyOptions& opts, std::ostream& out);

int cmd_spectra(const std::string& model_path, const std::string& out_dir, std::ostream& out);

int cmd_search(const std::string& space_path, const RunConfig& base, int n_trials, int threads,
               std::uint64_t master_seed, std::ostream& out);

// Maps an exception to {exit code, error JSON on `out`}.
int emit_error(const std::exception& e, std::ostream& out);

}  // namespace spam::cli
