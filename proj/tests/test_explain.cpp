#include <doctest.h>

#include <cmath>

#include "spam/explain.hpp"
#include "spam/forward.hpp"
#include "spam/interactions.hpp"

using namespace spam;

namespace {

SpamParams random_order2(Rng& rng, int d, int classes, int rank) {
  RankSpec spec{2, {rank}};
  return SpamParams::random_init(d, classes, spec, rng.next());
}

}  // namespace

TEST_CASE("hand example decomposes into two diagonals and one pairwise term") {
  RankSpec spec{2, {1}};
  SpamParams p = SpamParams::zeros(2, 1, spec);
  p.lambdas(2)(0, 0) = 2.0;
  p.basis(2).row(0) << 1.0, 1.0;
  Vector x(2);
  x << 0.25, 0.25;

  const Explanation ex = explain(p, x, 0);
  REQUIRE(ex.terms.size() == 5);  // 2 unary + 2 diagonal + 1 pairwise

  double diag_sum = 0.0, pair_sum = 0.0;
  for (const auto& t : ex.terms) {
    if (t.kind == TermKind::Diagonal) {
      CHECK(t.contribution == doctest::Approx(0.5).epsilon(1e-12));
      diag_sum += t.contribution;
    }
    if (t.kind == TermKind::Pairwise) {
      CHECK(t.i == 0);
      CHECK(t.j == 1);
      CHECK(t.contribution == doctest::Approx(1.0).epsilon(1e-12));
      pair_sum += t.contribution;
    }
  }
  CHECK(diag_sum == doctest::Approx(1.0));
  CHECK(pair_sum == doctest::Approx(1.0));
  CHECK(ex.bias + ex.contribution_sum() == doctest::Approx(ex.logit).epsilon(1e-12));
  CHECK(ex.logit == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("zero higher-order weights reduce to the linear decomposition") {
  RankSpec spec{2, {3}};
  SpamParams p = SpamParams::zeros(4, 1, spec);
  Rng rng(5);
  for (int i = 0; i < 4; ++i) p.order1(0, i) = rng.uniform(-1.0, 1.0);
  p.bias[0] = 0.3;
  Vector x(4);
  for (int i = 0; i < 4; ++i) x[i] = rng.uniform();

  const Explanation ex = explain(p, x, 0);
  for (const auto& t : ex.terms) {
    if (t.kind == TermKind::Unary)
      CHECK(t.contribution == doctest::Approx(p.order1(0, t.i) * x[t.i]).epsilon(1e-15));
    else
      CHECK(t.contribution == 0.0);
  }
}

TEST_CASE("explanation completeness on random order-2 models") {
  Rng rng(77);
  for (int t = 0; t < 300; ++t) {
    const int d = 2 + static_cast<int>(rng.below(7));
    const int classes = 1 + static_cast<int>(rng.below(3));
    const SpamParams p = random_order2(rng, d, classes, 1 + static_cast<int>(rng.below(4)));
    Vector x(d);
    for (int i = 0; i < d; ++i) x[i] = rng.uniform();
    const int c = static_cast<int>(rng.below(static_cast<std::uint64_t>(classes)));
    const Explanation ex = explain(p, x, c);
    const double recon = ex.bias + ex.contribution_sum();
    const double scale = std::max(1.0, std::abs(ex.logit));
    CHECK(std::abs(recon - ex.logit) / scale <= 1e-9);
  }
}

TEST_CASE("terms are sorted by magnitude") {
  Rng rng(123);
  const SpamParams p = random_order2(rng, 6, 1, 2);
  Vector x(6);
  for (int i = 0; i < 6; ++i) x[i] = rng.uniform();
  const Explanation ex = explain(p, x, 0);
  for (size_t i = 1; i < ex.terms.size(); ++i)
    CHECK(std::abs(ex.terms[i - 1].contribution) >= std::abs(ex.terms[i].contribution));
}

TEST_CASE("order-3 models are rejected") {
  RankSpec spec{3, {1, 1}};
  const SpamParams p = SpamParams::zeros(3, 1, spec);
  Vector x = Vector::Zero(3);
  CHECK_THROWS_WITH_AS(explain(p, x, 0), doctest::Contains("order"), Error);
}

TEST_CASE("active interactions census") {
  SUBCASE("all bases zero") {
    RankSpec spec{2, {2}};
    const SpamParams p = SpamParams::zeros(5, 1, spec);
    const auto act = active_interactions(p, 0, 1e-6);
    CHECK(act.pairs.empty());
    CHECK(act.fraction == 0.0);
  }

  SUBCASE("single pair with coefficient 0.5") {
    RankSpec spec{2, {1}};
    SpamParams p = SpamParams::zeros(2, 1, spec);
    p.basis(2).row(0) << 1.0, 0.5;
    p.lambdas(2)(0, 0) = 1.0;
    const auto act = active_interactions(p, 0, 1e-6);
    CHECK(act.pairs.size() == 1);
    CHECK(act.fraction == 1.0);
  }

  SUBCASE("rank-1 basis with m nonzero entries activates m(m-1)/2 pairs") {
    for (int m : {2, 3, 5, 7}) {
      const int d = 9;
      RankSpec spec{2, {1}};
      SpamParams p = SpamParams::zeros(d, 1, spec);
      for (int i = 0; i < m; ++i) p.basis(2)(0, i) = 0.5 + 0.1 * i;
      p.lambdas(2)(0, 0) = 1.0;
      const auto act = active_interactions(p, 0, 1e-6);
      CHECK(static_cast<int>(act.pairs.size()) == m * (m - 1) / 2);
    }
  }

  SUBCASE("monotone nonincreasing in tau") {
    Rng rng(31);
    const SpamParams p = random_order2(rng, 8, 1, 3);
    size_t prev = SIZE_MAX;
    for (double tau : {0.0, 1e-4, 1e-2, 1e-1, 1.0, 10.0}) {
      const auto act = active_interactions(p, 0, tau);
      CHECK(act.pairs.size() <= prev);
      prev = act.pairs.size();
    }
  }
}
