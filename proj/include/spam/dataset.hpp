#pragma once

#include <string>
#include <vector>

#include "spam/common.hpp"

namespace spam {

enum class TaskKind { Regression, Binary, Multiclass };

const char* task_kind_name(TaskKind task);
TaskKind task_kind_from_name(const std::string& name);

// Column roles: numeric features pass through, categorical features are
// one-hot encoded in declared category order, the target column is handled
// per task.
struct SchemaColumn {
  std::string name;
  enum class Type { Numeric, Categorical, Target } type = Type::Numeric;
  std::vector<std::string> categories;  // categorical only
};

struct Schema {
  TaskKind task = TaskKind::Regression;
  std::string target;
  std::vector<std::string> classes;  // raw target values in class order (classification)
  std::vector<SchemaColumn> columns;  // every CSV column, in header order

  static Schema from_json_file(const std::string& path);
  void validate() const;
};

// Parsed dataset before splitting/normalization.
struct RawTable {
  TaskKind task = TaskKind::Regression;
  int num_classes = 1;
  std::vector<std::string> feature_names;  // after one-hot expansion
  Matrix features;                         // n x d
  Vector target_real;                      // regression targets
  std::vector<int> target_class;           // class indices (classification)

  Index rows() const { return features.rows(); }
  int dims() const { return static_cast<int>(features.cols()); }
};

// RFC-4180-style CSV with a mandatory header matching the schema. Missing
// values are an error (no imputation); parse errors carry row/column
// coordinates.
RawTable load_csv(const std::string& path, const Schema& schema);

struct SplitIndices {
  std::vector<int> train, val, test;
};

// Deterministic shuffled partition: |val| = floor(n/10), |test| = floor(n/5),
// remainder to train.
SplitIndices split_70_10_20(int n, std::uint64_t seed);

// Per-column min/max fitted on the training rows only.
struct NormStats {
  Vector min, max;
};

NormStats fit_minmax(const Matrix& x, const std::vector<int>& rows);

// (x - min) / (max - min), constant columns map to zero, output clipped to
// [0, 1].
Matrix apply_minmax(const Matrix& x, const std::vector<int>& rows, const NormStats& stats);

// Normalized train/val/test views plus everything needed to score a model.
struct DatasetSplit {
  TaskKind task = TaskKind::Regression;
  int num_classes = 1;
  std::vector<std::string> feature_names;
  Matrix x_train, x_val, x_test;
  Vector y_train_real, y_val_real, y_test_real;
  std::vector<int> y_train_class, y_val_class, y_test_class;
  NormStats norm;

  int dims() const { return static_cast<int>(x_train.cols()); }
  Index n_train() const { return x_train.rows(); }
};

DatasetSplit make_split(const RawTable& raw, std::uint64_t seed);

// Per-epoch reshuffled minibatches keyed by (seed, epoch); the final short
// batch is retained.
std::vector<std::vector<int>> minibatches(int n, int batch_size, std::uint64_t seed, int epoch);

}  // namespace spam
