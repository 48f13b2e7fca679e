#include "spam/interactions.hpp"

#include <cmath>

namespace spam {

Matrix pairwise_coefficients(const SpamParams& params, int class_index) {
  require(class_index >= 0 && class_index < params.num_classes, "domain",
          "pairwise_coefficients: class index out of range");
  const int d = params.num_features;
  Matrix coef = Matrix::Zero(d, d);
  if (params.degree() < 2) return coef;
  const Matrix& u = params.basis(2);
  const auto lam = params.lambdas(2).row(class_index);
  for (Index i = 0; i < u.rows(); ++i)
    coef += lam[i] * (u.row(i).transpose() * u.row(i));
  return coef;
}

ActiveInteractions active_interactions(const SpamParams& params, int class_index, double tau) {
  require(tau >= 0.0, "domain", "active_interactions: tau must be nonnegative");
  ActiveInteractions out;
  const int d = params.num_features;
  if (d < 2) return out;
  const Matrix coef = pairwise_coefficients(params, class_index);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(coef(i, j)) > tau) out.pairs.insert({i, j});
  out.fraction =
      static_cast<double>(out.pairs.size()) / (static_cast<double>(d) * (d - 1) / 2.0);
  return out;
}

}  // namespace spam
