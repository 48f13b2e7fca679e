#pragma once

#include "spam/backprop.hpp"
#include "spam/dataset.hpp"
#include "spam/metrics.hpp"

namespace spam {

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;  // mean objective over the epoch's steps
  double val_metric = 0.0;
  double lr = 0.0;
};

struct TrainResult {
  SpamModel model;  // parameters from the best-validation epoch
  std::vector<EpochRecord> history;
  int best_epoch = -1;
  double best_val = 0.0;
};

// Minibatch training: per step, lambda-dropout -> forward -> loss +
// beta * L1 basis penalty -> reverse-mode gradients -> AdamW with the
// epoch's cosine-annealed lr (-> nonnegativity projection in convex mode).
// Single-threaded and bit-deterministic under a fixed config.
TrainResult train(const SpamModel& init, const DatasetSplit& data, const TrainConfig& cfg);

// Validation-style metric of a model on one split ("train"/"val"/"test").
double evaluate_split(const SpamModel& model, const DatasetSplit& data, const std::string& split);

}  // namespace spam
