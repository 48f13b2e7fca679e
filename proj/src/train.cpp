#include "spam/train.hpp"

#include <cmath>

namespace spam {

namespace {

void zero_model(SpamModel& grads) {
  for (auto& b : grads.blocks())
    for (Index i = 0; i < b.size; ++i) b.data[i] = 0.0;
}

void check_shapes(const SpamModel& model, const DatasetSplit& data, const TrainConfig& cfg) {
  require(model.input_dim() == data.dims(), "shape",
          "train: model expects " + std::to_string(model.input_dim()) + " features, data has " +
              std::to_string(data.dims()));
  if (model.neural())
    require(model.poly.num_features == model.nets->expanded_dim(), "shape",
            "train: polynomial head width must equal bank output width");
  const int C = model.poly.num_classes;
  switch (cfg.loss_kind) {
    case LossKind::Mse:
      require(data.task == TaskKind::Regression, "config", "mse loss needs a regression task");
      require(C == 1, "shape", "mse loss needs a single-output model");
      break;
    case LossKind::BinaryLogistic:
      require(data.task == TaskKind::Binary, "config",
              "binary-logistic loss needs a binary task");
      require(C == 1, "shape", "binary-logistic needs a single-logit model");
      break;
    case LossKind::SoftmaxCrossEntropy:
      require(data.task == TaskKind::Multiclass, "config",
              "softmax-cross-entropy needs a multiclass task");
      require(C == data.num_classes, "shape", "model classes must match dataset classes");
      break;
  }
}

}  // namespace

double evaluate_split(const SpamModel& model, const DatasetSplit& data, const std::string& split) {
  const Matrix* x = nullptr;
  const Vector* yr = nullptr;
  const std::vector<int>* yc = nullptr;
  if (split == "train") {
    x = &data.x_train; yr = &data.y_train_real; yc = &data.y_train_class;
  } else if (split == "val") {
    x = &data.x_val; yr = &data.y_val_real; yc = &data.y_val_class;
  } else if (split == "test") {
    x = &data.x_test; yr = &data.y_test_real; yc = &data.y_test_class;
  } else {
    fail("config", "evaluate_split: unknown split '" + split + "'");
  }
  return eval_metric(data.task, model.logits_rows(*x), *yr, *yc);
}

TrainResult train(const SpamModel& init, const DatasetSplit& data, const TrainConfig& cfg) {
  cfg.validate();
  check_shapes(init, data, cfg);

  TrainResult result;
  result.model = init;
  SpamModel& model = result.model;
  SpamModel grads = model.zeros_like();

  const int n = static_cast<int>(data.n_train());
  const long long steps_per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;
  auto pblocks = model.blocks();
  auto gblocks = grads.blocks();
  OptimizerState state = OptimizerState::init(pblocks, steps_per_epoch * cfg.epochs);

  Rng dropout_rng(derive_seed(cfg.seed, 0xD801));
  const bool higher_better = metric_higher_is_better(data.task);
  SpamModel best = model;
  const bool use_dropout = cfg.lambda_dropout_p > 0.0 && model.poly.degree() >= 2;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = cosine_lr(epoch, cfg.epochs, cfg.lr0, cfg.eta_min);
    const auto batches = minibatches(n, cfg.batch_size, cfg.seed, epoch);
    double loss_sum = 0.0;

    for (size_t bi = 0; bi < batches.size(); ++bi) {
      const auto& batch = batches[bi];
      Matrix xb(static_cast<Index>(batch.size()), data.dims());
      for (size_t i = 0; i < batch.size(); ++i) xb.row(static_cast<Index>(i)) = data.x_train.row(batch[i]);
      Vector yb_real;
      std::vector<int> yb_class;
      if (data.task == TaskKind::Regression) {
        yb_real.resize(static_cast<Index>(batch.size()));
        for (size_t i = 0; i < batch.size(); ++i) yb_real[static_cast<Index>(i)] = data.y_train_real[batch[i]];
      } else {
        yb_class.resize(batch.size());
        for (size_t i = 0; i < batch.size(); ++i)
          yb_class[i] = data.y_train_class[static_cast<size_t>(batch[i])];
      }

      std::vector<Matrix> masks;
      if (use_dropout) {
        for (int l = 2; l <= model.poly.degree(); ++l)
          masks.push_back(lambda_dropout_mask(model.poly.num_classes,
                                              model.poly.rank_spec.rank_at(l),
                                              cfg.lambda_dropout_p, dropout_rng, true));
      }

      zero_model(grads);
      const double obj = batch_objective_and_grad(model, xb, yb_real, yb_class, cfg.loss_kind,
                                                  cfg.beta_reg, masks, grads);
      if (!std::isfinite(obj))
        fail("numeric", "train: non-finite loss at epoch " + std::to_string(epoch) +
                            ", batch " + std::to_string(bi));
      loss_sum += obj * static_cast<double>(batch.size());

      adamw_step(state, pblocks, gblocks, lr, cfg.weight_decay, cfg);
    }

    const double train_loss = loss_sum / static_cast<double>(n);
    const double val_metric = evaluate_split(model, data, "val");
    result.history.push_back({epoch, train_loss, val_metric, lr});

    const bool improved = result.best_epoch < 0 ||
                          (higher_better ? val_metric > result.best_val
                                         : val_metric < result.best_val);
    if (improved) {
      result.best_epoch = epoch;
      result.best_val = val_metric;
      best = model;
    }
  }

  result.model = best;
  return result;
}

}  // namespace spam
