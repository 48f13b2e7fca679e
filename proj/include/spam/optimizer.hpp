#pragma once

#include "spam/losses.hpp"
#include "spam/params.hpp"

namespace spam {

inline constexpr int kMaxBatchSize = 1024;

struct TrainConfig {
  double lr0 = 1e-2;
  double eta_min = 0.0;
  double weight_decay = 0.0;
  double beta_reg = 0.0;          // scale of the L1 basis penalty
  double lambda_dropout_p = 0.0;  // in [0, 1)
  int epochs = 100;
  int batch_size = 256;           // capped at 1024
  std::uint64_t seed = 0;
  bool convex_mode = false;
  LossKind loss_kind = LossKind::Mse;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate() const;
};

// AdamW moments, flat per parameter block. t counts optimizer steps and never
// exceeds the planned horizon.
struct OptimizerState {
  std::vector<Vector> m;
  std::vector<Vector> v;
  long long t = 0;
  long long horizon = 0;

  static OptimizerState init(const std::vector<BlockRef>& blocks, long long horizon);
};

// Cosine annealing without warmup or restarts:
// eta_min + (lr0 - eta_min) * (1 + cos(pi t / T)) / 2.
double cosine_lr(long long t, long long total, double lr0, double eta_min);

// Sum of |u| over the higher-order basis matrices (orders >= 2 only).
double l1_basis_penalty(const SpamParams& params);

// Inverted dropout on singular values: during training each entry is zeroed
// with probability p and survivors are scaled by 1/(1-p); at inference the
// values pass through untouched. Returns the 0/(1/(1-p)) mask factors.
Matrix lambda_dropout_mask(Index rows, Index cols, double p, Rng& rng, bool training);

// One decoupled-weight-decay adaptive step over the given blocks.
// Decay applies directly to parameters, independent of the adaptive term;
// convex mode clamps parameters at zero afterwards. Rejects non-finite
// gradients with a diagnostic naming the offending block.
void adamw_step(OptimizerState& state, const std::vector<BlockRef>& params,
                const std::vector<BlockRef>& grads, double lr, double weight_decay,
                const TrainConfig& cfg);

}  // namespace spam
