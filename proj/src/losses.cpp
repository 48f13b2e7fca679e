#include "spam/losses.hpp"

#include <cmath>

namespace spam {

const char* loss_kind_name(LossKind kind) {
  switch (kind) {
    case LossKind::Mse: return "mse";
    case LossKind::BinaryLogistic: return "binary-logistic";
    case LossKind::SoftmaxCrossEntropy: return "softmax-cross-entropy";
  }
  return "?";
}

LossKind loss_kind_from_name(const std::string& name) {
  if (name == "mse") return LossKind::Mse;
  if (name == "binary-logistic") return LossKind::BinaryLogistic;
  if (name == "softmax-cross-entropy") return LossKind::SoftmaxCrossEntropy;
  fail("config", "unknown loss kind '" + name + "'");
}

namespace {

// log(1 + exp(-m)) without overflow
double softplus_neg(double m) {
  if (m > 0) return std::log1p(std::exp(-m));
  return -m + std::log1p(std::exp(m));
}

void check_labels(const std::vector<int>& labels, Index n, int num_classes) {
  require(static_cast<Index>(labels.size()) == n, "shape", "loss: label count mismatch");
  for (int y : labels)
    require(y >= 0 && y < num_classes, "domain",
            "loss: label " + std::to_string(y) + " out of range [0, " +
                std::to_string(num_classes) + ")");
}

}  // namespace

double loss_value(LossKind kind, const Matrix& logits, const Vector& target_real,
                  const std::vector<int>& target_class) {
  const Index n = logits.rows();
  require(n > 0, "shape", "loss: empty batch");
  switch (kind) {
    case LossKind::Mse: {
      require(logits.cols() == 1, "shape", "mse expects a single output");
      require(target_real.size() == n, "shape", "mse: target count mismatch");
      return (logits.col(0) - target_real).squaredNorm() / static_cast<double>(n);
    }
    case LossKind::BinaryLogistic: {
      require(logits.cols() == 1, "shape", "binary logistic expects a single logit");
      check_labels(target_class, n, 2);
      double acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        const double y = target_class[static_cast<size_t>(i)] == 1 ? 1.0 : -1.0;
        acc += softplus_neg(y * logits(i, 0));
      }
      return acc / static_cast<double>(n);
    }
    case LossKind::SoftmaxCrossEntropy: {
      check_labels(target_class, n, static_cast<int>(logits.cols()));
      double acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        const double m = logits.row(i).maxCoeff();
        double z = 0.0;
        for (Index c = 0; c < logits.cols(); ++c) z += std::exp(logits(i, c) - m);
        acc += std::log(z) + m - logits(i, target_class[static_cast<size_t>(i)]);
      }
      return acc / static_cast<double>(n);
    }
  }
  fail("config", "loss_value: bad kind");
}

Matrix loss_grad(LossKind kind, const Matrix& logits, const Vector& target_real,
                 const std::vector<int>& target_class) {
  const Index n = logits.rows();
  require(n > 0, "shape", "loss: empty batch");
  Matrix g(logits.rows(), logits.cols());
  switch (kind) {
    case LossKind::Mse: {
      require(logits.cols() == 1, "shape", "mse expects a single output");
      g.col(0) = 2.0 * (logits.col(0) - target_real) / static_cast<double>(n);
      return g;
    }
    case LossKind::BinaryLogistic: {
      check_labels(target_class, n, 2);
      for (Index i = 0; i < n; ++i) {
        const double y = target_class[static_cast<size_t>(i)] == 1 ? 1.0 : -1.0;
        // d/dz log(1+exp(-y z)) = -y * sigmoid(-y z)
        const double m = y * logits(i, 0);
        const double sig = 1.0 / (1.0 + std::exp(m));
        g(i, 0) = -y * sig / static_cast<double>(n);
      }
      return g;
    }
    case LossKind::SoftmaxCrossEntropy: {
      check_labels(target_class, n, static_cast<int>(logits.cols()));
      for (Index i = 0; i < n; ++i) {
        const double m = logits.row(i).maxCoeff();
        double z = 0.0;
        for (Index c = 0; c < logits.cols(); ++c) z += std::exp(logits(i, c) - m);
        for (Index c = 0; c < logits.cols(); ++c)
          g(i, c) = std::exp(logits(i, c) - m) / z / static_cast<double>(n);
        g(i, target_class[static_cast<size_t>(i)]) -= 1.0 / static_cast<double>(n);
      }
      return g;
    }
  }
  fail("config", "loss_grad: bad kind");
}

}  // namespace spam
