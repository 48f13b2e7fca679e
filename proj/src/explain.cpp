#include "spam/explain.hpp"

#include <algorithm>
#include <cmath>

#include "spam/forward.hpp"
#include "spam/interactions.hpp"

namespace spam {

const char* term_kind_name(TermKind kind) {
  switch (kind) {
    case TermKind::Unary: return "unary";
    case TermKind::Diagonal: return "diagonal";
    case TermKind::Pairwise: return "pairwise";
    case TermKind::NeuralUnary: return "neural-unary";
    case TermKind::NeuralPairwise: return "neural-pairwise";
  }
  return "?";
}

double Explanation::contribution_sum() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.contribution;
  return s;
}

namespace {

void sort_terms(std::vector<ExplanationTerm>& terms) {
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    return std::abs(a.contribution) > std::abs(b.contribution);
  });
}

void check_order(const SpamParams& params) {
  if (params.degree() > 2)
    fail("unsupported", "explain: exact per-term decomposition exists only for order <= 2 "
                        "(model has order " + std::to_string(params.degree()) + ")");
}

}  // namespace

Explanation explain(const SpamParams& params, const Vector& x, int class_index) {
  check_order(params);
  require(x.size() == params.num_features, "shape", "explain: input size mismatch");
  require(class_index >= 0 && class_index < params.num_classes, "domain",
          "explain: class index out of range");

  Explanation out;
  out.class_index = class_index;
  out.bias = params.bias[class_index];
  out.logit = poly_forward_multiclass(params, x)[class_index];

  const int d = params.num_features;
  for (int i = 0; i < d; ++i)
    out.terms.push_back({TermKind::Unary, i, -1, params.order1(class_index, i) * x[i]});

  if (params.degree() >= 2) {
    const Matrix coef = pairwise_coefficients(params, class_index);
    const Vector xt = rescale_features(x, 2);
    // diagonal uses xt_i^2 (= x_i on the nonnegative domain) so that
    // bias + sum of terms reproduces the logit identically
    for (int i = 0; i < d; ++i)
      out.terms.push_back({TermKind::Diagonal, i, -1, coef(i, i) * xt[i] * xt[i]});
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        out.terms.push_back({TermKind::Pairwise, i, j, 2.0 * coef(i, j) * xt[i] * xt[j]});
  }
  sort_terms(out.terms);
  return out;
}

Explanation neural_explain(const SpamParams& params, const FeatureNetBank& bank, const Vector& x,
                           int class_index) {
  check_order(params);
  require(params.num_features == bank.expanded_dim(), "shape",
          "neural_explain: polynomial/bank width mismatch");
  require(class_index >= 0 && class_index < params.num_classes, "domain",
          "neural_explain: class index out of range");

  Explanation out;
  out.class_index = class_index;
  out.bias = params.bias[class_index];
  out.logit = neural_forward_multiclass(params, bank, x)[class_index];

  const int d = bank.num_features;
  const int s = bank.subnets;
  const Vector f1 = feature_map_forward(bank, 1, x);
  for (int i = 0; i < d; ++i) {
    double c = 0.0;
    for (int a = 0; a < s; ++a) c += params.order1(class_index, i * s + a) * f1[i * s + a];
    out.terms.push_back({TermKind::NeuralUnary, i, -1, c});
  }

  if (params.degree() >= 2) {
    const Matrix coef = pairwise_coefficients(params, class_index);  // expanded dim
    const Vector f2 = feature_map_forward(bank, 2, x);
    // self terms: full within-block square; cross terms: both (a,b) orders
    Vector self = Vector::Zero(d);
    Matrix cross = Matrix::Zero(d, d);
    const int ds = bank.expanded_dim();
    for (int a = 0; a < ds; ++a) {
      const int fa = bank.feature_of_column(a);
      self[fa] += coef(a, a) * f2[a] * f2[a];
      for (int b = a + 1; b < ds; ++b) {
        const double v = 2.0 * coef(a, b) * f2[a] * f2[b];
        const int fb = bank.feature_of_column(b);
        if (fa == fb)
          self[fa] += v;
        else
          cross(fa, fb) += v;
      }
    }
    for (int i = 0; i < d; ++i)
      out.terms.push_back({TermKind::Diagonal, i, -1, self[i]});
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        out.terms.push_back({TermKind::NeuralPairwise, i, j, cross(i, j)});
  }
  sort_terms(out.terms);
  return out;
}

}  // namespace spam
