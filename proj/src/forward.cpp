#include "spam/forward.hpp"

#include <cmath>

namespace spam {

double rescale_feature(double x, int order) {
  if (order == 1 || x == 0.0) return x;
  const double a = std::abs(x);
  const double r = order == 2 ? std::sqrt(a) : std::pow(a, 1.0 / order);
  return x < 0 ? -r : r;
}

Vector rescale_features(const Vector& x, int order) {
  require(order >= 1, "domain", "rescale_features: order must be >= 1");
  if (order == 1) return x;
  Vector out(x.size());
  for (Index i = 0; i < x.size(); ++i) out[i] = rescale_feature(x[i], order);
  return out;
}

void rescale_in_place(Matrix& x, int order) {
  require(order >= 1, "domain", "rescale_in_place: order must be >= 1");
  if (order == 1) return;
  double* p = x.data();
  const Index n = x.size();
  for (Index i = 0; i < n; ++i) p[i] = rescale_feature(p[i], order);
}

Vector softmax(const Vector& logits) {
  const double m = logits.maxCoeff();
  Vector e = (logits.array() - m).exp();
  return e / e.sum();
}

Vector poly_forward_multiclass(const SpamParams& params, const Vector& x) {
  require(x.size() == params.num_features, "shape",
          "poly_forward: input size " + std::to_string(x.size()) + " != num_features " +
              std::to_string(params.num_features));
  Vector logits = params.bias + params.order1 * x;
  for (int l = 2; l <= params.degree(); ++l) {
    const Vector xt = rescale_features(x, l);
    const Vector s = params.basis(l) * xt;  // r_l inner products, shared across classes
    Vector powered(s.size());
    for (Index i = 0; i < s.size(); ++i) powered[i] = ipow(s[i], l);
    logits += params.lambdas(l) * powered;
  }
  return logits;
}

double poly_forward(const SpamParams& params, const Vector& x) {
  require(params.num_classes == 1, "shape", "poly_forward requires a single-logit model");
  return poly_forward_multiclass(params, x)[0];
}

Matrix poly_logits_rows(const SpamParams& params, const Matrix& x) {
  require(x.cols() == params.num_features, "shape", "poly_logits_rows: feature count mismatch");
  Matrix logits(x.rows(), params.num_classes);
  for (Index i = 0; i < x.rows(); ++i)
    logits.row(i) = poly_forward_multiclass(params, x.row(i).transpose()).transpose();
  return logits;
}

}  // namespace spam
