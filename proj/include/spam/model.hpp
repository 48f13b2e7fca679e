#pragma once

#include <optional>

#include "spam/feature_nets.hpp"
#include "spam/forward.hpp"
#include "spam/params.hpp"

namespace spam {

// A polynomial head plus, for SPAM-Neural, the feature-net bank feeding it.
// The composite is what training, serialization and the CLI operate on.
struct SpamModel {
  SpamParams poly;
  std::optional<FeatureNetBank> nets;
  bool convex_mode = false;  // provenance: trained under the nonnegativity projection

  bool neural() const { return nets.has_value(); }

  // Raw input dimension (d for linear models, d of the bank for neural ones;
  // the polynomial itself then spans d * subnets columns).
  int input_dim() const { return neural() ? nets->num_features : poly.num_features; }

  Vector logits_row(const Vector& x) const {
    return neural() ? neural_forward_multiclass(poly, *nets, x)
                    : poly_forward_multiclass(poly, x);
  }

  // Canonical inference path: row-wise, identical arithmetic to logits_row.
  Matrix logits_rows(const Matrix& x) const {
    return neural() ? neural_logits_rows(poly, *nets, x) : poly_logits_rows(poly, x);
  }

  std::vector<BlockRef> blocks() {
    auto b = param_blocks(poly);
    if (nets) {
      auto nb = param_blocks(*nets);
      b.insert(b.end(), nb.begin(), nb.end());
    }
    return b;
  }

  SpamModel zeros_like() const {
    SpamModel z;
    z.poly = SpamParams::zeros(poly.num_features, poly.num_classes, poly.rank_spec);
    if (nets) z.nets = nets->zeros_like();
    return z;
  }
};

}  // namespace spam
