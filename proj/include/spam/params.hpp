#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spam/common.hpp"

namespace spam {

// Degree and per-order ranks of the decomposed polynomial.
// ranks holds [r_2, ..., r_k]; the order-1 term always has rank 1.
struct RankSpec {
  int degree = 1;
  std::vector<int> ranks;

  void validate() const;
  int rank_at(int order) const;          // order in [2, degree]
  int higher_rank_sum() const;           // sum of r_l for l >= 2
  int cumulative_rank() const { return 1 + higher_rank_sum(); }
};

// Full parameter set of a polynomial model with shared higher-order bases:
//   logit_c(x) = bias[c] + <order1.row(c), x>
//              + sum_l sum_i singular[l](c,i) * <bases[l].row(i), rescale(x,l)>^l
// Bases are shared across classes; bias, order-1 weights and singular values
// are class-specific.
struct SpamParams {
  int num_features = 0;  // d
  int num_classes = 1;   // C; 1 = regression or single-logit binary
  RankSpec rank_spec;

  Vector bias;                   // C
  Matrix order1;                 // C x d
  std::vector<Matrix> bases;     // per order l=2..k: r_l x d
  std::vector<Matrix> singular;  // per order l=2..k: C x r_l

  int degree() const { return rank_spec.degree; }
  const Matrix& basis(int order) const { return bases[static_cast<size_t>(order - 2)]; }
  Matrix& basis(int order) { return bases[static_cast<size_t>(order - 2)]; }
  const Matrix& lambdas(int order) const { return singular[static_cast<size_t>(order - 2)]; }
  Matrix& lambdas(int order) { return singular[static_cast<size_t>(order - 2)]; }

  // Shape-consistent all-zero parameter set.
  static SpamParams zeros(int num_features, int num_classes, const RankSpec& spec);

  // Fan-in scaled uniform init; deterministic under seed. convex_mode folds
  // signs so every entry starts nonnegative.
  static SpamParams random_init(int num_features, int num_classes, const RankSpec& spec,
                                std::uint64_t seed, bool convex_mode = false);

  void validate() const;  // shapes + finiteness
  Index parameter_count() const;
};

// Contiguous view of one parameter block; used by the optimizer, the
// serializer and the finite-difference harness so they all agree on the
// parameter ordering.
struct BlockRef {
  std::string name;
  double* data = nullptr;
  Index size = 0;
};

std::vector<BlockRef> param_blocks(SpamParams& p);

// Parameter count for a (d, C, spec) configuration without materializing it.
// shared=true is the shared-basis layout used by this library; shared=false
// is the per-class-bases layout, kept for accounting comparisons.
long long param_count(int num_features, int num_classes, const RankSpec& spec, bool shared);

}  // namespace spam
