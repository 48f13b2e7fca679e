#include <doctest.h>

#include <cmath>

#include "spam/forward.hpp"

using namespace spam;

namespace {

SpamParams two_feature_quadratic() {
  // d=2, k=2, r2=1, b=0, u1=0, lambda=2, u=(1,1)
  RankSpec spec{2, {1}};
  SpamParams p = SpamParams::zeros(2, 1, spec);
  p.lambdas(2)(0, 0) = 2.0;
  p.basis(2)(0, 0) = 1.0;
  p.basis(2)(0, 1) = 1.0;
  return p;
}

}  // namespace

TEST_CASE("rescaling follows sign(x)|x|^(1/l)") {
  CHECK(rescale_feature(0.25, 2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rescale_feature(-0.027, 3) == doctest::Approx(-0.3).epsilon(1e-12));

  // induced pairwise feature is the geometric mean of the raw pair
  const double xi = rescale_feature(0.5, 2) * rescale_feature(0.6, 2);
  CHECK(xi == doctest::Approx(std::sqrt(0.5 * 0.6)).epsilon(1e-14));
  CHECK(xi == doctest::Approx(0.5477).epsilon(1e-3));
}

TEST_CASE("rescaling fixpoints and identity order") {
  for (int l = 1; l <= 6; ++l) {
    CHECK(rescale_feature(0.0, l) == 0.0);
    CHECK(rescale_feature(1.0, l) == 1.0);
    CHECK(rescale_feature(-1.0, l) == -1.0);
  }
  Vector x(4);
  x << -0.7, 0.0, 0.3, 1.0;
  CHECK(rescale_features(x, 1) == x);

  // sign preservation, [0,1] stays in [0,1]
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const double v = rng.uniform(-1.0, 1.0);
    for (int l = 1; l <= 4; ++l) {
      const double r = rescale_feature(v, l);
      CHECK(std::signbit(r) == std::signbit(v));
      CHECK(std::abs(r) <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("bias-only model returns the bias") {
  RankSpec spec{2, {3}};
  SpamParams p = SpamParams::zeros(4, 1, spec);
  p.bias[0] = 0.5;
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    Vector x(4);
    for (int i = 0; i < 4; ++i) x[i] = rng.uniform();
    CHECK(poly_forward(p, x) == 0.5);
  }
}

TEST_CASE("hand-computed quadratic contraction") {
  const SpamParams p = two_feature_quadratic();
  Vector x(2);
  x << 0.25, 0.25;
  // x~2 = (0.5, 0.5), <u, x~2> = 1, lambda * 1^2 = 2
  CHECK(poly_forward(p, x) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("multiclass shares bases and flips with lambda sign") {
  RankSpec spec{2, {1}};
  SpamParams p = SpamParams::zeros(2, 2, spec);
  p.basis(2)(0, 0) = 1.0;
  p.basis(2)(0, 1) = 1.0;
  p.lambdas(2)(0, 0) = 1.0;
  p.lambdas(2)(1, 0) = -1.0;
  Vector x(2);
  x << 0.25, 0.25;
  const Vector logits = poly_forward_multiclass(p, x);
  CHECK(logits[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(logits[1] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("identical per-class weights give identical logits") {
  RankSpec spec{2, {2}};
  SpamParams p = SpamParams::random_init(3, 1, spec, 11);
  SpamParams p2 = SpamParams::zeros(3, 2, spec);
  p2.bias.fill(p.bias[0]);
  p2.order1.row(0) = p.order1.row(0);
  p2.order1.row(1) = p.order1.row(0);
  p2.basis(2) = p.basis(2);
  p2.lambdas(2).row(0) = p.lambdas(2).row(0);
  p2.lambdas(2).row(1) = p.lambdas(2).row(0);
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    Vector x(3);
    for (int i = 0; i < 3; ++i) x[i] = rng.uniform();
    const Vector logits = poly_forward_multiclass(p2, x);
    CHECK(logits[0] == logits[1]);
  }
}

TEST_CASE("single-class multiclass path is bitwise poly_forward") {
  RankSpec spec{3, {2, 2}};
  const SpamParams p = SpamParams::random_init(4, 1, spec, 23);
  Rng rng(29);
  for (int t = 0; t < 50; ++t) {
    Vector x(4);
    for (int i = 0; i < 4; ++i) x[i] = rng.uniform();
    CHECK(poly_forward(p, x) == poly_forward_multiclass(p, x)[0]);
  }
}

TEST_CASE("forward rejects dimension mismatch") {
  const SpamParams p = two_feature_quadratic();
  Vector x(3);
  x.setZero();
  CHECK_THROWS_AS(poly_forward(p, x), Error);
}

TEST_CASE("softmax examples") {
  Vector z(4);
  z.setZero();
  const Vector u = softmax(z);
  for (int i = 0; i < 4; ++i) CHECK(u[i] == doctest::Approx(0.25).epsilon(1e-15));

  Vector big(2);
  big << 1000.0, 0.0;
  const Vector s = softmax(big);
  CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s[1] >= 0.0);
  CHECK(std::isfinite(s[1]));

  Vector two(2);
  two << std::log(2.0), 0.0;
  const Vector p = softmax(two);
  CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("softmax properties: normalization, argmax, shift invariance") {
  Rng rng(41);
  for (int t = 0; t < 200; ++t) {
    const int c = 2 + static_cast<int>(rng.below(5));
    Vector z(c);
    for (int i = 0; i < c; ++i) z[i] = rng.uniform(-30.0, 30.0);
    const Vector p = softmax(z);
    CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
    Index az, ap;
    z.maxCoeff(&az);
    p.maxCoeff(&ap);
    CHECK(az == ap);
    const Vector shifted = softmax((z.array() + rng.uniform(-5.0, 5.0)).matrix());
    CHECK((shifted - p).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("parameter counting") {
  RankSpec covtype_like{2, {100}};
  CHECK(param_count(54, 7, covtype_like, true) == 6485);

  RankSpec linear{1, {}};
  CHECK(param_count(2, 3, linear, true) == 9);
  CHECK(param_count(2, 3, linear, false) == 9);

  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    const int d = 1 + static_cast<int>(rng.below(20));
    const int c = 1 + static_cast<int>(rng.below(5));
    RankSpec spec;
    spec.degree = 1 + static_cast<int>(rng.below(3));
    for (int l = 2; l <= spec.degree; ++l)
      spec.ranks.push_back(1 + static_cast<int>(rng.below(8)));
    const long long shared = param_count(d, c, spec, true);
    const long long unshared = param_count(d, c, spec, false);
    CHECK(shared <= unshared);
    if (c == 1) CHECK(shared == unshared);
    if (c >= 2 && spec.degree >= 2) CHECK(shared < unshared);

    // census against a materialized parameter set
    SpamParams p = SpamParams::zeros(d, c, spec);
    CHECK(p.parameter_count() == shared);
  }
}

TEST_CASE("rank spec validation") {
  CHECK_THROWS_AS((RankSpec{0, {}}).validate(), Error);
  CHECK_THROWS_AS((RankSpec{2, {}}).validate(), Error);
  CHECK_THROWS_AS((RankSpec{2, {0}}).validate(), Error);
  RankSpec ok{3, {4, 5}};
  ok.validate();
  CHECK(ok.cumulative_rank() == 10);
}
