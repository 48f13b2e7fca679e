#include "spam/params.hpp"

#include <cmath>

namespace spam {

void RankSpec::validate() const {
  require(degree >= 1, "config", "rank spec: degree must be >= 1");
  require(static_cast<int>(ranks.size()) == degree - 1, "config",
          "rank spec: need exactly degree-1 ranks, got " + std::to_string(ranks.size()) +
              " for degree " + std::to_string(degree));
  for (int r : ranks)
    require(r >= 1, "config", "rank spec: every rank must be >= 1");
}

int RankSpec::rank_at(int order) const {
  require(order >= 2 && order <= degree, "config",
          "rank_at: order " + std::to_string(order) + " outside [2, degree]");
  return ranks[static_cast<size_t>(order - 2)];
}

int RankSpec::higher_rank_sum() const {
  int s = 0;
  for (int r : ranks) s += r;
  return s;
}

SpamParams SpamParams::zeros(int num_features, int num_classes, const RankSpec& spec) {
  spec.validate();
  require(num_features >= 1, "config", "num_features must be >= 1");
  require(num_classes >= 1, "config", "num_classes must be >= 1");
  SpamParams p;
  p.num_features = num_features;
  p.num_classes = num_classes;
  p.rank_spec = spec;
  p.bias = Vector::Zero(num_classes);
  p.order1 = Matrix::Zero(num_classes, num_features);
  for (int l = 2; l <= spec.degree; ++l) {
    p.bases.emplace_back(Matrix::Zero(spec.rank_at(l), num_features));
    p.singular.emplace_back(Matrix::Zero(num_classes, spec.rank_at(l)));
  }
  return p;
}

SpamParams SpamParams::random_init(int num_features, int num_classes, const RankSpec& spec,
                                   std::uint64_t seed, bool convex_mode) {
  SpamParams p = zeros(num_features, num_classes, spec);
  Rng rng(seed);
  auto fill = [&](Matrix& m, double limit) {
    for (Index j = 0; j < m.cols(); ++j)
      for (Index i = 0; i < m.rows(); ++i) {
        double v = rng.uniform(-limit, limit);
        m(i, j) = convex_mode ? std::abs(v) : v;
      }
  };
  const double d_limit = 1.0 / std::sqrt(static_cast<double>(num_features));
  fill(p.order1, d_limit);
  for (int l = 2; l <= spec.degree; ++l) {
    fill(p.basis(l), d_limit);
    fill(p.lambdas(l), 1.0 / std::sqrt(static_cast<double>(spec.rank_at(l))));
  }
  return p;
}

void SpamParams::validate() const {
  rank_spec.validate();
  const int d = num_features, c = num_classes, k = rank_spec.degree;
  require(bias.size() == c, "shape", "bias size mismatch");
  require(order1.rows() == c && order1.cols() == d, "shape", "order1 shape mismatch");
  require(static_cast<int>(bases.size()) == k - 1 && static_cast<int>(singular.size()) == k - 1,
          "shape", "per-order container count mismatch");
  for (int l = 2; l <= k; ++l) {
    const int r = rank_spec.rank_at(l);
    require(basis(l).rows() == r && basis(l).cols() == d, "shape",
            "basis shape mismatch at order " + std::to_string(l));
    require(lambdas(l).rows() == c && lambdas(l).cols() == r, "shape",
            "singular-value shape mismatch at order " + std::to_string(l));
  }
  bool finite = all_finite(bias) && all_finite(order1);
  for (const auto& m : bases) finite = finite && all_finite(m);
  for (const auto& m : singular) finite = finite && all_finite(m);
  require(finite, "numeric", "parameters contain non-finite entries");
}

Index SpamParams::parameter_count() const {
  Index n = bias.size() + order1.size();
  for (const auto& m : bases) n += m.size();
  for (const auto& m : singular) n += m.size();
  return n;
}

std::vector<BlockRef> param_blocks(SpamParams& p) {
  std::vector<BlockRef> blocks;
  blocks.push_back({"bias", p.bias.data(), p.bias.size()});
  blocks.push_back({"order1", p.order1.data(), p.order1.size()});
  for (int l = 2; l <= p.rank_spec.degree; ++l) {
    blocks.push_back({"basis/" + std::to_string(l), p.basis(l).data(), p.basis(l).size()});
    blocks.push_back({"singular/" + std::to_string(l), p.lambdas(l).data(), p.lambdas(l).size()});
  }
  return blocks;
}

long long param_count(int num_features, int num_classes, const RankSpec& spec, bool shared) {
  spec.validate();
  const long long d = num_features, c = num_classes;
  const long long rsum = spec.higher_rank_sum();
  if (shared) return c * (1 + d) + c * rsum + d * rsum;
  return c * (1 + d + rsum * (d + 1));
}

}  // namespace spam
