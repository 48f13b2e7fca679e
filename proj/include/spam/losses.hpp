#pragma once

#include "spam/common.hpp"

namespace spam {

enum class LossKind { Mse, BinaryLogistic, SoftmaxCrossEntropy };

const char* loss_kind_name(LossKind kind);
LossKind loss_kind_from_name(const std::string& name);

// Mean loss over a batch. logits is (n x C); labels are class indices for the
// classification losses (C = 1 and labels in {0,1} for binary logistic,
// internally mapped to +-1) and real targets for mse.
double loss_value(LossKind kind, const Matrix& logits, const Vector& target_real,
                  const std::vector<int>& target_class);

// dLoss/dlogits for the mean-reduced batch loss, same shape as logits.
Matrix loss_grad(LossKind kind, const Matrix& logits, const Vector& target_real,
                 const std::vector<int>& target_class);

}  // namespace spam
