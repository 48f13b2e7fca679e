#pragma once

#include "spam/params.hpp"

namespace spam {

// Dense expansion of a single-logit model: one symmetric order-l coefficient
// tensor per order, stored row-major over d^l cells. Brute-force oracle for
// the decomposed forward pass; intended for small d and k only.
struct ExpandedPolynomial {
  int num_features = 0;
  int degree = 1;
  double bias = 0.0;
  Vector order1;                      // d
  std::vector<std::vector<double>> tensors;  // per order l=2..k, size d^l

  const std::vector<double>& tensor(int order) const {
    return tensors[static_cast<size_t>(order - 2)];
  }
};

inline constexpr long long kDefaultOracleCap = 10'000'000;  // max d^l cells per tensor

// W^(l) = sum_i lambda_li * u_li^(x l). Each cell is a product taken in
// sorted index order so the result is exactly permutation symmetric.
// Refuses when any d^l exceeds the cap.
ExpandedPolynomial expand_full(const SpamParams& params, long long oracle_cap = kDefaultOracleCap);

// bias + sum_l W^(l) contracted l times against rescale(x, l); naive O(d^l)
// loop per order.
double eval_expanded(const ExpandedPolynomial& poly, const Vector& x);

}  // namespace spam
