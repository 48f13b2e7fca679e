#pragma once

#include "spam/dataset.hpp"

namespace spam {

double rmse(const Vector& pred, const Vector& target);

// Mann-Whitney rank estimator; tied scores receive their average rank.
// Requires both classes present.
double auroc(const Vector& scores, const std::vector<int>& labels);

// Fraction of rows whose argmax logit equals the label; argmax ties break to
// the lowest class index.
double accuracy_top1(const Matrix& logits, const std::vector<int>& labels);

const char* metric_name(TaskKind task);  // rmse / auroc / accuracy
bool metric_higher_is_better(TaskKind task);

// Task metric from logits: rmse for regression, sigmoid-score auroc for
// binary, top-1 accuracy for multiclass.
double eval_metric(TaskKind task, const Matrix& logits, const Vector& y_real,
                   const std::vector<int>& y_class);

}  // namespace spam
