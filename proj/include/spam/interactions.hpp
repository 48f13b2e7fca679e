#pragma once

#include <set>
#include <utility>

#include "spam/params.hpp"

namespace spam {

// Aggregated order-2 interaction coefficients for one class:
//   M(a, b) = sum_i lambda_2i^c * u_2i[a] * u_2i[b]   (d x d, symmetric).
// Models of degree 1 yield the zero matrix.
Matrix pairwise_coefficients(const SpamParams& params, int class_index);

struct ActiveInteractions {
  std::set<std::pair<int, int>> pairs;  // unordered pairs {i, j}, i < j
  double fraction = 0.0;                // |pairs| / (d * (d-1) / 2)
};

inline constexpr double kDefaultInteractionTau = 1e-6;

// Pair {i, j} is active iff |M(i, j)| > tau.
ActiveInteractions active_interactions(const SpamParams& params, int class_index,
                                       double tau = kDefaultInteractionTau);

}  // namespace spam
