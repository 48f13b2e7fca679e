#pragma once

#include <functional>
#include <optional>

#include "spam/common.hpp"

namespace spam {

// Random-search sampling spec. Only the hyperparameters present in the space
// file are resampled; everything else stays at the base config value.
struct SearchSpace {
  struct LogUniform {
    double lo = 0.0, hi = 0.0;
  };
  struct Uniform {
    double lo = 0.0, hi = 0.0;
  };
  std::optional<LogUniform> lr;
  std::optional<LogUniform> weight_decay;
  std::optional<Uniform> lambda_dropout;
  std::optional<std::vector<std::vector<int>>> ranks;  // candidate rank vectors [r2, ...]

  static SearchSpace from_json_file(const std::string& path);
  void validate() const;
};

struct TrialParams {
  int id = 0;
  std::uint64_t seed = 0;
  std::optional<double> lr;
  std::optional<double> weight_decay;
  std::optional<double> lambda_dropout;
  std::optional<std::vector<int>> ranks;
};

struct TrialRecord {
  TrialParams params;
  bool failed = false;
  std::string error;
  double val_metric = 0.0;
  double test_metric = 0.0;
  double wall_seconds = 0.0;
};

// All trial parameters are sampled up front from the master seed, so results
// are invariant to the execution parallelism.
std::vector<TrialParams> sample_trials(const SearchSpace& space, int n_trials,
                                       std::uint64_t master_seed);

struct TrialOutcome {
  double val_metric = 0.0;
  double test_metric = 0.0;
};

using TrialRunner = std::function<TrialOutcome(const TrialParams&)>;

// Runs trials on `threads` workers; failed trials are recorded, not fatal.
std::vector<TrialRecord> run_search(const SearchSpace& space, int n_trials,
                                    std::uint64_t master_seed, int threads,
                                    const TrialRunner& runner);

// Index of the best successful trial under the task direction, or -1.
int best_trial(const std::vector<TrialRecord>& records, bool higher_is_better);

}  // namespace spam
