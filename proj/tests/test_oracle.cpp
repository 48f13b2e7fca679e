#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "spam/expand.hpp"
#include "spam/forward.hpp"

using namespace spam;

namespace {

SpamParams random_instance(Rng& rng, int d, int k) {
  RankSpec spec;
  spec.degree = k;
  for (int l = 2; l <= k; ++l) spec.ranks.push_back(1 + static_cast<int>(rng.below(3)));
  SpamParams p = SpamParams::zeros(d, 1, spec);
  p.bias[0] = rng.uniform(-1.0, 1.0);
  for (int i = 0; i < d; ++i) p.order1(0, i) = rng.uniform(-1.0, 1.0);
  for (int l = 2; l <= k; ++l) {
    for (Index r = 0; r < p.basis(l).rows(); ++r)
      for (Index c = 0; c < p.basis(l).cols(); ++c) p.basis(l)(r, c) = rng.uniform(-1.0, 1.0);
    for (Index r = 0; r < p.lambdas(l).cols(); ++r) p.lambdas(l)(0, r) = rng.uniform(-1.0, 1.0);
  }
  return p;
}

}  // namespace

TEST_CASE("rank-1 order-2 expansion is the scaled outer product") {
  RankSpec spec{2, {1}};
  SpamParams p = SpamParams::zeros(2, 1, spec);
  p.basis(2)(0, 0) = 1.0;
  p.basis(2)(0, 1) = 2.0;
  p.lambdas(2)(0, 0) = 3.0;
  const ExpandedPolynomial ep = expand_full(p);
  const auto& w = ep.tensor(2);
  CHECK(w[0] == 3.0);   // (0,0): 3*1*1
  CHECK(w[1] == 6.0);   // (0,1): 3*1*2
  CHECK(w[2] == 6.0);   // (1,0)
  CHECK(w[3] == 12.0);  // (1,1): 3*2*2
}

TEST_CASE("expanded tensors are exactly permutation symmetric") {
  Rng rng(1234);
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + static_cast<int>(rng.below(3));
    const SpamParams p = random_instance(rng, d, 3);
    const ExpandedPolynomial ep = expand_full(p);

    const auto& w2 = ep.tensor(2);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        CHECK(w2[static_cast<size_t>(a * d + b)] == w2[static_cast<size_t>(b * d + a)]);

    const auto& w3 = ep.tensor(3);
    auto at = [&](int a, int b, int c) {
      return w3[static_cast<size_t>((a * d + b) * d + c)];
    };
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c) {
          CHECK(at(a, b, c) == at(a, c, b));
          CHECK(at(a, b, c) == at(b, a, c));
          CHECK(at(a, b, c) == at(c, b, a));
        }
  }
}

TEST_CASE("order-2 expansion equals the sum of scaled outer products") {
  Rng rng(99);
  RankSpec spec{2, {2}};
  SpamParams p = SpamParams::zeros(3, 1, spec);
  for (Index r = 0; r < 2; ++r) {
    for (Index c = 0; c < 3; ++c) p.basis(2)(r, c) = rng.uniform(-1.0, 1.0);
    p.lambdas(2)(0, r) = rng.uniform(-1.0, 1.0);
  }
  const ExpandedPolynomial ep = expand_full(p);
  Matrix expect = Matrix::Zero(3, 3);
  for (Index r = 0; r < 2; ++r)
    expect += p.lambdas(2)(0, r) * p.basis(2).row(r).transpose() * p.basis(2).row(r);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(ep.tensor(2)[static_cast<size_t>(a * 3 + b)] ==
            doctest::Approx(expect(a, b)).epsilon(1e-15));
}

TEST_CASE("dense evaluation matches the hand example") {
  RankSpec spec{2, {1}};
  SpamParams p = SpamParams::zeros(2, 1, spec);
  p.lambdas(2)(0, 0) = 2.0;
  p.basis(2)(0, 0) = 1.0;
  p.basis(2)(0, 1) = 1.0;
  Vector x(2);
  x << 0.25, 0.25;
  CHECK(eval_expanded(expand_full(p), x) == doctest::Approx(2.0).epsilon(1e-12));

  ExpandedPolynomial zero;
  zero.num_features = 2;
  zero.degree = 1;
  zero.bias = 0.7;
  zero.order1 = Vector::Zero(2);
  CHECK(eval_expanded(zero, x) == 0.7);
}

TEST_CASE("decomposed forward equals dense expansion on random instances") {
  Rng rng(2024);
  double max_dev = 0.0;
  for (int t = 0; t < 300; ++t) {
    const int d = 1 + static_cast<int>(rng.below(6));
    const int k = 1 + static_cast<int>(rng.below(3));
    const SpamParams p = random_instance(rng, d, k);
    const ExpandedPolynomial ep = expand_full(p);
    for (int rep = 0; rep < 3; ++rep) {
      Vector x(d);
      for (int i = 0; i < d; ++i) x[i] = rng.uniform(-1.0, 1.0);
      max_dev = std::max(max_dev, std::abs(poly_forward(p, x) - eval_expanded(ep, x)));
    }
  }
  CHECK(max_dev <= 1e-9);
}

TEST_CASE("oracle cap refuses oversized expansions") {
  RankSpec spec{3, {1, 1}};
  const SpamParams p = SpamParams::zeros(300, 1, spec);  // 300^3 = 2.7e7 > cap
  CHECK_THROWS_AS(expand_full(p), Error);
  // and the override admits it
  CHECK_NOTHROW(expand_full(SpamParams::zeros(8, 1, spec)));
}
