#include "spam/backprop.hpp"

#include <cmath>

namespace spam {

namespace {

struct ForwardScratch {
  Matrix logits;                     // B x C
  std::vector<Matrix> inputs;        // per order l>=2: rescaled inputs or net outputs
  std::vector<Matrix> s;             // per order: B x r_l inner products
  std::vector<Matrix> powered;       // per order: s^l
  Matrix f1;                         // order-1 inputs (neural only)
  std::vector<std::vector<NetCache>> caches;  // per order (neural only), index 0 = order 1
};

// Shared forward pass over a batch. `with_caches` keeps what the backward
// pass needs.
void run_forward(const SpamModel& model, const Matrix& x,
                 const std::vector<Matrix>& lambda_masks, bool with_caches,
                 ForwardScratch& ws) {
  const SpamParams& p = model.poly;
  require(x.cols() == model.input_dim(), "shape", "batch forward: feature width mismatch");
  require(lambda_masks.empty() ||
              static_cast<int>(lambda_masks.size()) == std::max(0, p.degree() - 1),
          "shape", "batch forward: one dropout mask per order >= 2 expected");

  const int k = p.degree();
  const bool neural = model.neural();
  if (neural && with_caches) ws.caches.resize(static_cast<size_t>(k));

  Matrix first;
  if (neural) {
    first = feature_map_forward_batch(*model.nets, 1, x,
                                      with_caches ? &ws.caches[0] : nullptr);
    if (with_caches) ws.f1 = first;
  } else {
    first = x;
  }
  ws.logits = ((first * p.order1.transpose()).rowwise() + p.bias.transpose());

  ws.inputs.clear();
  ws.s.clear();
  ws.powered.clear();
  for (int l = 2; l <= k; ++l) {
    Matrix xl;
    if (neural) {
      xl = feature_map_forward_batch(*model.nets, l, x,
                                     with_caches ? &ws.caches[static_cast<size_t>(l - 1)]
                                                 : nullptr);
    } else {
      xl = x;
      rescale_in_place(xl, l);
    }
    Matrix s = xl * p.basis(l).transpose();  // B x r_l
    Matrix powered(s.rows(), s.cols());
    for (Index c = 0; c < s.cols(); ++c)
      for (Index r = 0; r < s.rows(); ++r) powered(r, c) = ipow(s(r, c), l);
    Matrix lam = p.lambdas(l);
    if (!lambda_masks.empty()) lam = lam.cwiseProduct(lambda_masks[static_cast<size_t>(l - 2)]);
    ws.logits += powered * lam.transpose();
    ws.inputs.push_back(std::move(xl));
    ws.s.push_back(std::move(s));
    ws.powered.push_back(std::move(powered));
  }
}

double objective_from_logits(const SpamModel& model, const Matrix& logits, const Vector& y_real,
                             const std::vector<int>& y_class, LossKind kind, double beta_reg) {
  double obj = loss_value(kind, logits, y_real, y_class);
  if (beta_reg > 0.0) obj += beta_reg * l1_basis_penalty(model.poly);
  return obj;
}

}  // namespace

double batch_objective(const SpamModel& model, const Matrix& x, const Vector& y_real,
                       const std::vector<int>& y_class, LossKind kind, double beta_reg,
                       const std::vector<Matrix>& lambda_masks) {
  ForwardScratch ws;
  run_forward(model, x, lambda_masks, false, ws);
  return objective_from_logits(model, ws.logits, y_real, y_class, kind, beta_reg);
}

double batch_objective_and_grad(const SpamModel& model, const Matrix& x, const Vector& y_real,
                                const std::vector<int>& y_class, LossKind kind, double beta_reg,
                                const std::vector<Matrix>& lambda_masks, SpamModel& grads) {
  const SpamParams& p = model.poly;
  ForwardScratch ws;
  run_forward(model, x, lambda_masks, true, ws);
  const double obj = objective_from_logits(model, ws.logits, y_real, y_class, kind, beta_reg);

  const Matrix g = loss_grad(kind, ws.logits, y_real, y_class);  // B x C
  SpamParams& gp = grads.poly;
  gp.bias += g.colwise().sum().transpose();

  const bool neural = model.neural();
  const Matrix& first = neural ? ws.f1 : x;
  gp.order1 += g.transpose() * first;

  Matrix dfirst;  // dLoss/dF_1, only needed for the neural path
  if (neural) dfirst = g * p.order1;

  for (int l = 2; l <= p.degree(); ++l) {
    const size_t li = static_cast<size_t>(l - 2);
    const Matrix& xl = ws.inputs[li];
    const Matrix& s = ws.s[li];
    Matrix lam = p.lambdas(l);
    const Matrix* mask =
        lambda_masks.empty() ? nullptr : &lambda_masks[li];
    if (mask) lam = lam.cwiseProduct(*mask);

    // d logits / d lambda = s^l, chained through the dropout factor
    Matrix glam = g.transpose() * ws.powered[li];  // C x r_l
    if (mask) glam = glam.cwiseProduct(*mask);
    gp.lambdas(l) += glam;

    // dLoss/dS = (g lam) .* (l * s^(l-1))
    Matrix ds = g * lam;  // B x r_l
    for (Index c = 0; c < ds.cols(); ++c)
      for (Index r = 0; r < ds.rows(); ++r)
        ds(r, c) *= static_cast<double>(l) * ipow(s(r, c), l - 1);
    gp.basis(l) += ds.transpose() * xl;

    if (neural) {
      const Matrix dxl = ds * p.basis(l);  // B x (d*s)
      feature_map_backward_batch(*model.nets, l, ws.caches[static_cast<size_t>(l - 1)], dxl,
                                 *grads.nets);
    }
  }

  if (neural)
    feature_map_backward_batch(*model.nets, 1, ws.caches[0], dfirst, *grads.nets);

  if (beta_reg > 0.0)
    for (int l = 2; l <= p.degree(); ++l)
      gp.basis(l) += beta_reg * p.basis(l).array().sign().matrix();

  return obj;
}

double grad_check(const SpamModel& model, const Matrix& x, const Vector& y_real,
                  const std::vector<int>& y_class, LossKind kind, std::uint64_t seed,
                  double step) {
  SpamModel work = model;
  SpamModel grads = model.zeros_like();
  const std::vector<Matrix> no_masks;
  batch_objective_and_grad(work, x, y_real, y_class, kind, 0.0, no_masks, grads);

  auto pblocks = work.blocks();
  auto gblocks = grads.blocks();
  Index total = 0;
  for (const auto& b : pblocks) total += b.size;

  Rng rng(derive_seed(seed, 0xFD));
  Index samples = std::max<Index>(25, total / 20);
  samples = std::min(samples, total);

  double max_rel = 0.0;
  for (Index si = 0; si < samples; ++si) {
    Index flat = static_cast<Index>(rng.below(static_cast<std::uint64_t>(total)));
    size_t bi = 0;
    while (flat >= pblocks[bi].size) {
      flat -= pblocks[bi].size;
      ++bi;
    }
    double* slot = pblocks[bi].data + flat;
    const double analytic = gblocks[bi].data[flat];
    const double saved = *slot;
    *slot = saved + step;
    const double up = batch_objective(work, x, y_real, y_class, kind, 0.0, no_masks);
    *slot = saved - step;
    const double dn = batch_objective(work, x, y_real, y_class, kind, 0.0, no_masks);
    *slot = saved;
    const double fd = (up - dn) / (2.0 * step);
    const double denom = std::max({std::abs(analytic), std::abs(fd), 1e-6});
    max_rel = std::max(max_rel, std::abs(analytic - fd) / denom);
  }
  return max_rel;
}

}  // namespace spam
