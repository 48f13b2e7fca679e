#include "spam/expand.hpp"

#include <algorithm>
#include <cmath>

#include "spam/forward.hpp"

namespace spam {

namespace {

long long checked_cells(int d, int order, long long cap) {
  long long cells = 1;
  for (int i = 0; i < order; ++i) {
    cells *= d;
    if (cells > cap)
      fail("domain", "expand_full: d^" + std::to_string(order) + " exceeds oracle cap of " +
                         std::to_string(cap) + " cells");
  }
  return cells;
}

// Iterate a multi-index over {0..d-1}^order in row-major order.
bool advance(std::vector<int>& idx, int d) {
  for (int pos = static_cast<int>(idx.size()) - 1; pos >= 0; --pos) {
    if (++idx[static_cast<size_t>(pos)] < d) return true;
    idx[static_cast<size_t>(pos)] = 0;
  }
  return false;
}

}  // namespace

ExpandedPolynomial expand_full(const SpamParams& params, long long oracle_cap) {
  params.validate();
  require(params.num_classes == 1, "shape", "expand_full requires a single-logit model");
  const int d = params.num_features;
  const int k = params.degree();

  ExpandedPolynomial out;
  out.num_features = d;
  out.degree = k;
  out.bias = params.bias[0];
  out.order1 = params.order1.row(0).transpose();

  std::vector<int> sorted;
  for (int l = 2; l <= k; ++l) {
    const long long cells = checked_cells(d, l, oracle_cap);
    std::vector<double> w(static_cast<size_t>(cells), 0.0);
    const Matrix& u = params.basis(l);
    const int r = params.rank_spec.rank_at(l);
    for (int i = 0; i < r; ++i) {
      const double lam = params.lambdas(l)(0, i);
      std::vector<int> idx(static_cast<size_t>(l), 0);
      size_t flat = 0;
      do {
        // product over the sorted multi-index: any permutation of the same
        // index set lands on the identical sequence of multiplications
        sorted.assign(idx.begin(), idx.end());
        std::sort(sorted.begin(), sorted.end());
        double prod = lam;
        for (int j : sorted) prod *= u(i, j);
        w[flat++] += prod;
      } while (advance(idx, d));
    }
    out.tensors.push_back(std::move(w));
  }
  return out;
}

double eval_expanded(const ExpandedPolynomial& poly, const Vector& x) {
  require(x.size() == poly.num_features, "shape", "eval_expanded: input size mismatch");
  const int d = poly.num_features;
  double acc = poly.bias + poly.order1.dot(x);
  for (int l = 2; l <= poly.degree; ++l) {
    const Vector xt = rescale_features(x, l);
    const auto& w = poly.tensor(l);
    std::vector<int> idx(static_cast<size_t>(l), 0);
    size_t flat = 0;
    double term = 0.0;
    do {
      double prod = w[flat++];
      for (int j : idx) prod *= xt[j];
      term += prod;
    } while (advance(idx, d));
    acc += term;
  }
  return acc;
}

}  // namespace spam
