#include "spam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spam {

double rmse(const Vector& pred, const Vector& target) {
  require(pred.size() == target.size() && pred.size() > 0, "shape",
          "rmse: vectors must have equal nonzero length");
  return std::sqrt((pred - target).squaredNorm() / static_cast<double>(pred.size()));
}

double auroc(const Vector& scores, const std::vector<int>& labels) {
  const Index n = scores.size();
  require(static_cast<Index>(labels.size()) == n && n > 0, "shape", "auroc: size mismatch");
  long long npos = 0;
  for (int y : labels) {
    require(y == 0 || y == 1, "domain", "auroc: labels must be 0/1");
    npos += y;
  }
  const long long nneg = n - npos;
  require(npos > 0 && nneg > 0, "domain", "auroc: both classes must be present");

  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return scores[a] < scores[b]; });

  // average ranks over tie groups, 1-based
  double rank_sum_pos = 0.0;
  Index i = 0;
  while (i < n) {
    Index j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Index t = i; t <= j; ++t)
      if (labels[static_cast<size_t>(order[t])] == 1) rank_sum_pos += avg_rank;
    i = j + 1;
  }
  const double u = rank_sum_pos - static_cast<double>(npos) * (static_cast<double>(npos) + 1.0) / 2.0;
  return u / (static_cast<double>(npos) * static_cast<double>(nneg));
}

double accuracy_top1(const Matrix& logits, const std::vector<int>& labels) {
  require(static_cast<Index>(labels.size()) == logits.rows() && logits.rows() > 0, "shape",
          "accuracy_top1: size mismatch");
  long long hits = 0;
  for (Index r = 0; r < logits.rows(); ++r) {
    const int y = labels[static_cast<size_t>(r)];
    require(y >= 0 && y < logits.cols(), "domain", "accuracy_top1: label out of range");
    Index best = 0;
    for (Index c = 1; c < logits.cols(); ++c)
      if (logits(r, c) > logits(r, best)) best = c;  // strict: ties keep the lowest index
    if (best == y) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(logits.rows());
}

const char* metric_name(TaskKind task) {
  switch (task) {
    case TaskKind::Regression: return "rmse";
    case TaskKind::Binary: return "auroc";
    case TaskKind::Multiclass: return "accuracy";
  }
  return "?";
}

bool metric_higher_is_better(TaskKind task) { return task != TaskKind::Regression; }

double eval_metric(TaskKind task, const Matrix& logits, const Vector& y_real,
                   const std::vector<int>& y_class) {
  switch (task) {
    case TaskKind::Regression:
      require(logits.cols() == 1, "shape", "regression expects a single output");
      return rmse(logits.col(0), y_real);
    case TaskKind::Binary: {
      require(logits.cols() == 1, "shape", "binary task expects a single logit");
      Vector score(logits.rows());
      for (Index i = 0; i < logits.rows(); ++i)
        score[i] = 1.0 / (1.0 + std::exp(-logits(i, 0)));
      return auroc(score, y_class);
    }
    case TaskKind::Multiclass:
      return accuracy_top1(logits, y_class);
  }
  fail("config", "eval_metric: bad task");
}

}  // namespace spam
