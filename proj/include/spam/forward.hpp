#pragma once

#include "spam/params.hpp"

namespace spam {

// Geometric rescaling x~_l = sign(x) * |x|^(1/l). Order 1 is the identity,
// sign(0) = 0, and {0, 1, -1} are fixpoints at every order.
double rescale_feature(double x, int order);
Vector rescale_features(const Vector& x, int order);

// Row-wise rescaling of a batch (n x d), applied in place.
void rescale_in_place(Matrix& x, int order);

// Numerically stable softmax (max subtraction); entries sum to 1.
Vector softmax(const Vector& logits);

// Single-logit forward pass, C = 1. O(d * cumulative rank).
double poly_forward(const SpamParams& params, const Vector& x);

// Per-class logits with shared bases: the inner products <u_li, x~_l> are
// computed once and combined per class.
Vector poly_forward_multiclass(const SpamParams& params, const Vector& x);

// Logits for every row of x (n x d) -> (n x C), canonical per-row arithmetic
// (identical to poly_forward_multiclass on each row).
Matrix poly_logits_rows(const SpamParams& params, const Matrix& x);

}  // namespace spam
