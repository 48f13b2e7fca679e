#pragma once

#include "spam/feature_nets.hpp"
#include "spam/params.hpp"

namespace spam {

enum class TermKind { Unary, Diagonal, Pairwise, NeuralUnary, NeuralPairwise };

const char* term_kind_name(TermKind kind);

struct ExplanationTerm {
  TermKind kind;
  int i = -1;            // feature index
  int j = -1;            // second feature for pairwise terms, else -1
  double contribution = 0.0;
};

// Exact additive decomposition of one logit: bias + sum of contributions
// reconstructs the logit. Terms are sorted by |contribution| descending.
struct Explanation {
  double bias = 0.0;
  std::vector<ExplanationTerm> terms;
  double logit = 0.0;
  int class_index = 0;

  double contribution_sum() const;
};

// Per-term decomposition of logit class_index at x in [0,1]^d:
//   unary      u1_i * x_i
//   diagonal   (sum_i lam_i u_i^2) * x_j          (order-2 self terms)
//   pairwise   2 * (sum_i lam_i u_ia u_ib) * sqrt(x_a x_b), one term per
//              unordered pair {a,b}
// Orders k >= 3 have no exact pairwise decomposition and are rejected.
Explanation explain(const SpamParams& params, const Vector& x, int class_index);

// Same contract with feature-net outputs in place of the rescaled inputs;
// subnet contributions are aggregated back to original feature indices.
Explanation neural_explain(const SpamParams& params, const FeatureNetBank& bank, const Vector& x,
                           int class_index);

}  // namespace spam
