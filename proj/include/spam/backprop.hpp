#pragma once

#include "spam/model.hpp"
#include "spam/optimizer.hpp"

namespace spam {

// Mean batch objective: loss + beta_reg * l1_basis_penalty. lambda_masks, when
// nonempty, holds one inverted-dropout factor matrix per order l >= 2
// (shape C x r_l) applied multiplicatively to the singular values.
double batch_objective(const SpamModel& model, const Matrix& x, const Vector& y_real,
                       const std::vector<int>& y_class, LossKind kind, double beta_reg,
                       const std::vector<Matrix>& lambda_masks);

// Same objective plus reverse-mode gradients accumulated into `grads`
// (a zeroed shape-compatible clone of the model).
double batch_objective_and_grad(const SpamModel& model, const Matrix& x, const Vector& y_real,
                                const std::vector<int>& y_class, LossKind kind, double beta_reg,
                                const std::vector<Matrix>& lambda_masks, SpamModel& grads);

// Max relative error between reverse-mode and central-difference gradients
// over a deterministic ~5% subsample of parameters (at least 25 entries).
double grad_check(const SpamModel& model, const Matrix& x, const Vector& y_real,
                  const std::vector<int>& y_class, LossKind kind, std::uint64_t seed,
                  double step = 1e-5);

}  // namespace spam
