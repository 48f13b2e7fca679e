#pragma once

#include "spam/params.hpp"

namespace spam {

// Hidden-layer activations for the per-feature nets. The exponential unit
// computes clamp(exp(w) * (x - b), 0, 1); weights live in log space so the
// effective slope is always positive.
enum class Activation { Relu, ExU };

struct NetLayer {
  Matrix w;  // out x in
  Vector b;  // out
};

// One small fully-connected net mapping a single feature value to `subnets`
// outputs. The final layer is linear; hidden layers use the bank activation.
struct FeatureNet {
  std::vector<NetLayer> layers;

  Index parameter_count() const;
};

// Per-order, per-feature transformation bank for SPAM-Neural. With weight
// tying enabled the same nets serve every order.
struct FeatureNetBank {
  int num_features = 0;  // d (original features)
  int degree = 1;        // k
  int subnets = 1;       // s outputs per feature
  bool tied = false;
  Activation activation = Activation::Relu;
  // orders[l-1][feature]; a tied bank stores a single order slot
  std::vector<std::vector<FeatureNet>> orders;

  const std::vector<FeatureNet>& nets_for_order(int order) const;
  std::vector<FeatureNet>& nets_for_order(int order);
  int expanded_dim() const { return num_features * subnets; }
  int feature_of_column(int col) const { return col / subnets; }
  Index parameter_count() const;

  // Shape-compatible all-zero clone, used as gradient storage.
  FeatureNetBank zeros_like() const;
};

// arch "deep": hidden [64, 64, 32], rectifier; arch "wide": hidden [1024],
// exponential units. Weights drawn fan-in-scaled uniform, deterministic
// under seed.
FeatureNetBank init_bank(const std::string& arch, int num_features, int degree, int subnets,
                         std::uint64_t seed, bool tied = false);

// Single linear layer per net, weight 1 bias 0: every output equals the
// input feature. Useful as the reduction case in tests and verification.
FeatureNetBank identity_bank(int num_features, int degree, int subnets = 1, bool tied = false);

// Concatenated net outputs in feature-major order, length d * s.
Vector feature_map_forward(const FeatureNetBank& bank, int order, const Vector& x);

// --- batched training path -------------------------------------------------

// Cached per-layer inputs and pre-activations of one net on one batch.
struct NetCache {
  std::vector<Matrix> inputs;    // layer input, B x in
  std::vector<Matrix> preacts;   // affine output before activation, B x out
};

// Batch feature map (B x d) -> (B x d*s); fills per-feature caches when
// given (required for the backward pass).
Matrix feature_map_forward_batch(const FeatureNetBank& bank, int order, const Matrix& x,
                                 std::vector<NetCache>* caches);

// Accumulates dLoss/dWeights into `grads` given dLoss/dF (B x d*s).
void feature_map_backward_batch(const FeatureNetBank& bank, int order,
                                const std::vector<NetCache>& caches, const Matrix& dout,
                                FeatureNetBank& grads);

// --- polynomial head over net outputs --------------------------------------

// P(x) = b + <u1, F_1(x)> + sum_l sum_i lam_li <u_li, F_l(x)>^l.
// No geometric rescaling is applied to net outputs.
Vector neural_forward_multiclass(const SpamParams& params, const FeatureNetBank& bank,
                                 const Vector& x);
double neural_forward(const SpamParams& params, const FeatureNetBank& bank, const Vector& x);
Matrix neural_logits_rows(const SpamParams& params, const FeatureNetBank& bank, const Matrix& x);

std::vector<BlockRef> param_blocks(FeatureNetBank& bank);

}  // namespace spam
