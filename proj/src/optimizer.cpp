#include "spam/optimizer.hpp"

#include <cmath>

namespace spam {

void TrainConfig::validate() const {
  require(lr0 > 0.0, "config", "lr0 must be positive");
  require(eta_min >= 0.0, "config", "eta_min must be nonnegative");
  require(weight_decay >= 0.0, "config", "weight_decay must be nonnegative");
  require(beta_reg >= 0.0, "config", "beta_reg must be nonnegative");
  require(lambda_dropout_p >= 0.0 && lambda_dropout_p < 1.0, "config",
          "lambda_dropout_p must lie in [0, 1)");
  require(epochs >= 1, "config", "epochs must be >= 1");
  require(batch_size >= 1 && batch_size <= kMaxBatchSize, "config",
          "batch_size must lie in [1, " + std::to_string(kMaxBatchSize) + "]");
}

OptimizerState OptimizerState::init(const std::vector<BlockRef>& blocks, long long horizon) {
  OptimizerState s;
  s.horizon = horizon;
  for (const auto& b : blocks) {
    s.m.emplace_back(Vector::Zero(b.size));
    s.v.emplace_back(Vector::Zero(b.size));
  }
  return s;
}

double cosine_lr(long long t, long long total, double lr0, double eta_min) {
  require(total >= 1, "config", "cosine_lr: horizon must be >= 1");
  require(t >= 0 && t <= total, "config", "cosine_lr: t outside [0, T]");
  const double frac = static_cast<double>(t) / static_cast<double>(total);
  return eta_min + 0.5 * (lr0 - eta_min) * (1.0 + std::cos(M_PI * frac));
}

double l1_basis_penalty(const SpamParams& params) {
  double acc = 0.0;
  for (const auto& u : params.bases) acc += u.cwiseAbs().sum();
  return acc;
}

Matrix lambda_dropout_mask(Index rows, Index cols, double p, Rng& rng, bool training) {
  require(p >= 0.0 && p < 1.0, "config", "lambda dropout probability must lie in [0, 1)");
  if (!training || p == 0.0) return Matrix::Ones(rows, cols);
  const double scale = 1.0 / (1.0 - p);
  Matrix mask(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) mask(r, c) = rng.uniform() < p ? 0.0 : scale;
  return mask;
}

void adamw_step(OptimizerState& state, const std::vector<BlockRef>& params,
                const std::vector<BlockRef>& grads, double lr, double weight_decay,
                const TrainConfig& cfg) {
  require(params.size() == grads.size() && params.size() == state.m.size(), "shape",
          "adamw_step: block count mismatch");
  require(lr > 0.0, "config", "adamw_step: lr must be positive");

  for (size_t bi = 0; bi < grads.size(); ++bi) {
    const BlockRef& g = grads[bi];
    for (Index i = 0; i < g.size; ++i)
      if (!std::isfinite(g.data[i]))
        fail("numeric", "adamw_step: non-finite gradient in block '" + g.name + "' at entry " +
                            std::to_string(i));
  }

  state.t += 1;
  const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(state.t));

  for (size_t bi = 0; bi < params.size(); ++bi) {
    double* th = params[bi].data;
    const double* g = grads[bi].data;
    double* m = state.m[bi].data();
    double* v = state.v[bi].data();
    const Index n = params[bi].size;
    require(n == grads[bi].size, "shape",
            "adamw_step: size mismatch in block '" + params[bi].name + "'");
    for (Index i = 0; i < n; ++i) {
      m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * g[i];
      v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      th[i] -= lr * weight_decay * th[i];
      th[i] -= lr * mhat / (std::sqrt(vhat) + cfg.adam_eps);
      if (cfg.convex_mode && th[i] < 0.0) th[i] = 0.0;
    }
  }
}

}  // namespace spam
