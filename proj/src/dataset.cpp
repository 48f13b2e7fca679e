#include "spam/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace spam {

using nlohmann::json;

const char* task_kind_name(TaskKind task) {
  switch (task) {
    case TaskKind::Regression: return "regression";
    case TaskKind::Binary: return "binary";
    case TaskKind::Multiclass: return "multiclass";
  }
  return "?";
}

TaskKind task_kind_from_name(const std::string& name) {
  if (name == "regression") return TaskKind::Regression;
  if (name == "binary") return TaskKind::Binary;
  if (name == "multiclass") return TaskKind::Multiclass;
  fail("schema", "unknown task kind '" + name + "'");
}

Schema Schema::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("io", "cannot open schema file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail("schema", "schema '" + path + "' is not valid JSON: " + e.what());
  }
  Schema s;
  try {
    s.task = task_kind_from_name(j.at("task").get<std::string>());
    s.target = j.at("target").get<std::string>();
    if (j.contains("classes")) s.classes = j.at("classes").get<std::vector<std::string>>();
    for (const auto& jc : j.at("columns")) {
      SchemaColumn col;
      col.name = jc.at("name").get<std::string>();
      const std::string type = jc.value("type", "numeric");
      if (type == "numeric") {
        col.type = SchemaColumn::Type::Numeric;
      } else if (type == "categorical") {
        col.type = SchemaColumn::Type::Categorical;
        col.categories = jc.at("categories").get<std::vector<std::string>>();
      } else if (type == "target") {
        col.type = SchemaColumn::Type::Target;
      } else {
        fail("schema", "column '" + col.name + "': unknown type '" + type + "'");
      }
      s.columns.push_back(std::move(col));
    }
  } catch (const json::exception& e) {
    fail("schema", "schema '" + path + "' is malformed: " + e.what());
  }
  s.validate();
  return s;
}

void Schema::validate() const {
  require(!columns.empty(), "schema", "schema declares no columns");
  int target_count = 0;
  for (const auto& c : columns) {
    if (c.type == SchemaColumn::Type::Target) {
      require(c.name == target, "schema", "target-typed column does not match 'target' field");
      ++target_count;
    }
    if (c.type == SchemaColumn::Type::Categorical)
      require(!c.categories.empty(), "schema",
              "categorical column '" + c.name + "' lists no categories");
  }
  require(target_count == 1, "schema", "schema must declare exactly one target column");
  if (task != TaskKind::Regression) {
    require(!classes.empty(), "schema", "classification schema must list target classes");
    if (task == TaskKind::Binary)
      require(classes.size() == 2, "schema", "binary task needs exactly 2 classes");
  }
}

namespace {

bool is_missing(const std::string& tok) {
  return tok.empty() || tok == "NA" || tok == "N/A" || tok == "NaN" || tok == "nan" ||
         tok == "null" || tok == "NULL" || tok == "?";
}

// One CSV record, RFC-4180 quoting. Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  int ch;
  while ((ch = in.get()) != EOF) {
    any = true;
    char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get();
      break;
    } else {
      field.push_back(c);
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

double parse_number(const std::string& tok, Index row, const std::string& col) {
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    fail("parse", "row " + std::to_string(row) + ", column '" + col + "': cannot parse '" + tok +
                      "' as a number");
  return value;
}

}  // namespace

RawTable load_csv(const std::string& path, const Schema& schema) {
  schema.validate();
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("io", "cannot open dataset file '" + path + "'");

  std::vector<std::string> header;
  require(read_record(in, header), "schema", "dataset '" + path + "' is empty");
  require(header.size() == schema.columns.size(), "schema",
          "header has " + std::to_string(header.size()) + " columns, schema declares " +
              std::to_string(schema.columns.size()));
  for (size_t i = 0; i < header.size(); ++i)
    require(header[i] == schema.columns[i].name, "schema",
            "header column " + std::to_string(i) + " is '" + header[i] + "', schema declares '" +
                schema.columns[i].name + "'");

  RawTable out;
  out.task = schema.task;
  out.num_classes = schema.task == TaskKind::Regression
                        ? 1
                        : static_cast<int>(schema.classes.size());

  // Column plan: offset of each source column in the expanded feature space.
  int dims = 0;
  std::vector<int> offsets(schema.columns.size(), -1);
  for (size_t c = 0; c < schema.columns.size(); ++c) {
    const auto& col = schema.columns[c];
    if (col.type == SchemaColumn::Type::Target) continue;
    offsets[c] = dims;
    if (col.type == SchemaColumn::Type::Numeric) {
      out.feature_names.push_back(col.name);
      dims += 1;
    } else {
      for (const auto& cat : col.categories) out.feature_names.push_back(col.name + "=" + cat);
      dims += static_cast<int>(col.categories.size());
    }
  }

  std::unordered_map<std::string, int> class_index;
  for (size_t i = 0; i < schema.classes.size(); ++i)
    class_index.emplace(schema.classes[i], static_cast<int>(i));

  std::vector<double> feat_data;
  std::vector<double> targets_real;
  std::vector<int> targets_class;
  std::vector<std::string> fields;
  Index row = 0;
  while (read_record(in, fields)) {
    ++row;
    if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank line
    require(fields.size() == schema.columns.size(), "parse",
            "row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                " fields, expected " + std::to_string(schema.columns.size()));
    const size_t base = feat_data.size();
    feat_data.resize(base + static_cast<size_t>(dims), 0.0);
    for (size_t c = 0; c < fields.size(); ++c) {
      const auto& col = schema.columns[c];
      const std::string& tok = fields[c];
      if (is_missing(tok))
        fail("parse", "row " + std::to_string(row) + ", column '" + col.name +
                          "': missing value");
      switch (col.type) {
        case SchemaColumn::Type::Numeric:
          feat_data[base + static_cast<size_t>(offsets[c])] = parse_number(tok, row, col.name);
          break;
        case SchemaColumn::Type::Categorical: {
          auto it = std::find(col.categories.begin(), col.categories.end(), tok);
          if (it == col.categories.end())
            fail("domain", "row " + std::to_string(row) + ", column '" + col.name +
                               "': unknown category '" + tok + "'");
          const auto k = static_cast<size_t>(it - col.categories.begin());
          feat_data[base + static_cast<size_t>(offsets[c]) + k] = 1.0;
          break;
        }
        case SchemaColumn::Type::Target:
          if (schema.task == TaskKind::Regression) {
            targets_real.push_back(parse_number(tok, row, col.name));
          } else {
            auto it = class_index.find(tok);
            if (it == class_index.end())
              fail("domain", "row " + std::to_string(row) + ": target value '" + tok +
                                 "' not among declared classes");
            targets_class.push_back(it->second);
          }
          break;
      }
    }
  }
  require(row > 0, "parse", "dataset '" + path + "' has no data rows");

  const Index n = row;
  out.features.resize(n, dims);
  for (Index r = 0; r < n; ++r)
    for (int c = 0; c < dims; ++c)
      out.features(r, c) = feat_data[static_cast<size_t>(r) * dims + static_cast<size_t>(c)];
  if (schema.task == TaskKind::Regression) {
    out.target_real = Eigen::Map<Vector>(targets_real.data(), n);
  } else {
    out.target_class = std::move(targets_class);
  }
  return out;
}

SplitIndices split_70_10_20(int n, std::uint64_t seed) {
  require(n >= 10, "domain", "split_70_10_20: need at least 10 rows, got " + std::to_string(n));
  Rng rng(derive_seed(seed, 0x5714));
  const std::vector<int> perm = rng.permutation(n);
  const int n_val = n / 10;
  const int n_test = n / 5;
  const int n_train = n - n_val - n_test;
  SplitIndices idx;
  idx.train.assign(perm.begin(), perm.begin() + n_train);
  idx.val.assign(perm.begin() + n_train, perm.begin() + n_train + n_val);
  idx.test.assign(perm.begin() + n_train + n_val, perm.end());
  return idx;
}

NormStats fit_minmax(const Matrix& x, const std::vector<int>& rows) {
  require(!rows.empty(), "domain", "fit_minmax: empty training index set");
  NormStats st;
  st.min = Vector::Constant(x.cols(), std::numeric_limits<double>::infinity());
  st.max = Vector::Constant(x.cols(), -std::numeric_limits<double>::infinity());
  for (int r : rows) {
    for (Index c = 0; c < x.cols(); ++c) {
      st.min[c] = std::min(st.min[c], x(r, c));
      st.max[c] = std::max(st.max[c], x(r, c));
    }
  }
  return st;
}

Matrix apply_minmax(const Matrix& x, const std::vector<int>& rows, const NormStats& stats) {
  Matrix out(static_cast<Index>(rows.size()), x.cols());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (Index c = 0; c < x.cols(); ++c) {
      const double range = stats.max[c] - stats.min[c];
      double v = range > 0.0 ? (x(rows[i], c) - stats.min[c]) / range : 0.0;
      out(static_cast<Index>(i), c) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

DatasetSplit make_split(const RawTable& raw, std::uint64_t seed) {
  const SplitIndices idx = split_70_10_20(static_cast<int>(raw.rows()), seed);
  DatasetSplit ds;
  ds.task = raw.task;
  ds.num_classes = raw.num_classes;
  ds.feature_names = raw.feature_names;
  ds.norm = fit_minmax(raw.features, idx.train);
  ds.x_train = apply_minmax(raw.features, idx.train, ds.norm);
  ds.x_val = apply_minmax(raw.features, idx.val, ds.norm);
  ds.x_test = apply_minmax(raw.features, idx.test, ds.norm);
  auto gather_real = [&](const std::vector<int>& rows) {
    Vector y(static_cast<Index>(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i) y[static_cast<Index>(i)] = raw.target_real[rows[i]];
    return y;
  };
  auto gather_class = [&](const std::vector<int>& rows) {
    std::vector<int> y(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) y[i] = raw.target_class[static_cast<size_t>(rows[i])];
    return y;
  };
  if (raw.task == TaskKind::Regression) {
    ds.y_train_real = gather_real(idx.train);
    ds.y_val_real = gather_real(idx.val);
    ds.y_test_real = gather_real(idx.test);
  } else {
    ds.y_train_class = gather_class(idx.train);
    ds.y_val_class = gather_class(idx.val);
    ds.y_test_class = gather_class(idx.test);
  }
  return ds;
}

std::vector<std::vector<int>> minibatches(int n, int batch_size, std::uint64_t seed, int epoch) {
  require(batch_size >= 1, "config", "minibatches: batch_size must be >= 1");
  Rng rng(derive_seed(seed, 0xB47C0000ull + static_cast<std::uint64_t>(epoch)));
  const std::vector<int> perm = rng.permutation(n);
  std::vector<std::vector<int>> batches;
  for (int start = 0; start < n; start += batch_size) {
    const int stop = std::min(n, start + batch_size);
    batches.emplace_back(perm.begin() + start, perm.begin() + stop);
  }
  return batches;
}

}  // namespace spam
