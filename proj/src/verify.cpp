#include "spam/verify.hpp"

#include <cmath>

#include "spam/backprop.hpp"

namespace spam {

namespace {

RankSpec random_spec(Rng& rng, int max_k) {
  RankSpec spec;
  spec.degree = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_k)));
  for (int l = 2; l <= spec.degree; ++l)
    spec.ranks.push_back(1 + static_cast<int>(rng.below(3)));
  return spec;
}

SpamParams random_params(Rng& rng, int d, int c, const RankSpec& spec) {
  SpamParams p = SpamParams::zeros(d, c, spec);
  auto fill = [&](Matrix& m) {
    for (Index j = 0; j < m.cols(); ++j)
      for (Index i = 0; i < m.rows(); ++i) m(i, j) = rng.uniform(-1.0, 1.0);
  };
  for (Index i = 0; i < p.bias.size(); ++i) p.bias[i] = rng.uniform(-1.0, 1.0);
  fill(p.order1);
  for (int l = 2; l <= spec.degree; ++l) {
    fill(p.basis(l));
    fill(p.lambdas(l));
  }
  return p;
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& opts) {
  VerifyReport report;
  report.forward_tol = opts.forward_tol;
  report.grad_tol = opts.grad_tol;
  Rng rng(derive_seed(opts.seed, 0xFE51F1));

  for (int t = 0; t < opts.trials; ++t) {
    const int d = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(opts.max_d)));
    const RankSpec spec = random_spec(rng, opts.max_k);

    // (1) forward equivalence against the dense expansion
    {
      const SpamParams p = random_params(rng, d, 1, spec);
      Vector x(d);
      for (int i = 0; i < d; ++i) x[i] = rng.uniform(-1.0, 1.0);
      double fast = poly_forward(p, x);
      if (opts.corrupt_forward) fast += 1e-6;
      const double dense = eval_expanded(expand_full(p, opts.oracle_cap), x);
      report.max_forward_dev = std::max(report.max_forward_dev, std::abs(fast - dense));
    }

    // (2) gradient checks across loss kinds on small batches
    {
      const Index batch = 4;
      Matrix xb(batch, d);
      for (Index r = 0; r < batch; ++r)
        for (int cidx = 0; cidx < d; ++cidx) xb(r, cidx) = rng.uniform();

      struct Case {
        LossKind kind;
        int classes;
      };
      const Case cases[] = {{LossKind::Mse, 1},
                            {LossKind::BinaryLogistic, 1},
                            {LossKind::SoftmaxCrossEntropy, 3}};
      for (const auto& cs : cases) {
        SpamModel model;
        model.poly = random_params(rng, d, cs.classes, spec);
        Vector yr;
        std::vector<int> yc;
        if (cs.kind == LossKind::Mse) {
          yr.resize(batch);
          for (Index i = 0; i < batch; ++i) yr[i] = rng.uniform(-1.0, 1.0);
        } else {
          const int label_space = cs.kind == LossKind::BinaryLogistic ? 2 : cs.classes;
          for (Index i = 0; i < batch; ++i)
            yc.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(label_space))));
        }
        const double err = grad_check(model, xb, yr, yc, cs.kind, rng.next());
        report.max_grad_rel_err = std::max(report.max_grad_rel_err, err);
      }

      // neural path, small bank to keep the finite differences cheap
      {
        SpamModel model;
        const int s = 1 + static_cast<int>(rng.below(2));
        FeatureNetBank bank = init_bank("deep", d, spec.degree, s, rng.next());
        model.poly = random_params(rng, d * s, 1, spec);
        model.nets = std::move(bank);
        Vector yr(batch);
        for (Index i = 0; i < batch; ++i) yr[i] = rng.uniform(-1.0, 1.0);
        const double err = grad_check(model, xb, yr, {}, LossKind::Mse, rng.next());
        report.max_grad_rel_err = std::max(report.max_grad_rel_err, err);
      }
    }
    ++report.trials;
  }

  report.pass = report.max_forward_dev <= opts.forward_tol &&
                report.max_grad_rel_err <= opts.grad_tol;
  return report;
}

}  // namespace spam
