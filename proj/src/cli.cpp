#include "spam/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spam/explain.hpp"
#include "spam/model_io.hpp"
#include "spam/spectral.hpp"

namespace spam::cli {

using nlohmann::json;
namespace fs = std::filesystem;

RunConfig RunConfig::from_json_file(const std::string& path) {
  const json j = load_json_file(path);
  RunConfig cfg;
  try {
    const auto& jd = j.at("dataset");
    cfg.dataset_name = jd.value("name", "");
    cfg.csv_path = jd.at("csv").get<std::string>();
    cfg.schema_path = jd.at("schema").get<std::string>();
    cfg.split_seed = jd.value("split_seed", 0ull);

    if (j.contains("model")) {
      const auto& jm = j.at("model");
      cfg.degree = jm.value("degree", 1);
      cfg.ranks = jm.value("ranks", std::vector<int>{});
      cfg.neural = jm.value("neural", false);
      cfg.arch = jm.value("arch", "deep");
      cfg.subnets = jm.value("subnets", 1);
      cfg.tied = jm.value("tied", false);
    }

    if (j.contains("train")) {
      const auto& jt = j.at("train");
      cfg.train.lr0 = jt.value("lr", cfg.train.lr0);
      cfg.train.eta_min = jt.value("eta_min", cfg.train.eta_min);
      cfg.train.weight_decay = jt.value("weight_decay", cfg.train.weight_decay);
      cfg.train.beta_reg = jt.value("beta", cfg.train.beta_reg);
      cfg.train.lambda_dropout_p = jt.value("lambda_dropout", cfg.train.lambda_dropout_p);
      if (jt.contains("epochs")) {
        cfg.train.epochs = jt.at("epochs").get<int>();
        cfg.epochs_explicit = true;
      }
      cfg.train.batch_size = jt.value("batch_size", cfg.train.batch_size);
      cfg.train.convex_mode = jt.value("convex", false);
      cfg.loss_name = jt.value("loss", "auto");
      cfg.train.seed = jt.value("seed", 0ull);
    }
    cfg.out_dir = j.value("out", cfg.out_dir);
  } catch (const json::exception& e) {
    fail("config", "config '" + path + "' is malformed: " + e.what());
  }
  return cfg;
}

json RunConfig::to_json() const {
  json j;
  j["dataset"] = {{"name", dataset_name},
                  {"csv", csv_path},
                  {"schema", schema_path},
                  {"split_seed", split_seed}};
  j["model"] = {{"degree", degree}, {"ranks", ranks},       {"neural", neural},
                {"arch", arch},     {"subnets", subnets},   {"tied", tied}};
  j["train"] = {{"lr", train.lr0},
                {"eta_min", train.eta_min},
                {"weight_decay", train.weight_decay},
                {"beta", train.beta_reg},
                {"lambda_dropout", train.lambda_dropout_p},
                {"epochs", train.epochs},
                {"batch_size", train.batch_size},
                {"convex", train.convex_mode},
                {"loss", loss_name},
                {"seed", train.seed}};
  j["out"] = out_dir;
  return j;
}

DatasetSplit load_dataset(const RunConfig& cfg) {
  const Schema schema = Schema::from_json_file(cfg.schema_path);
  const RawTable raw = load_csv(cfg.csv_path, schema);
  return make_split(raw, cfg.split_seed);
}

namespace {

LossKind resolve_loss(const std::string& name, TaskKind task) {
  if (name != "auto") return loss_kind_from_name(name);
  switch (task) {
    case TaskKind::Regression: return LossKind::Mse;
    case TaskKind::Binary: return LossKind::BinaryLogistic;
    case TaskKind::Multiclass: return LossKind::SoftmaxCrossEntropy;
  }
  fail("config", "resolve_loss: bad task");
}

int default_epochs(const std::string& dataset_name) {
  if (dataset_name == "california" || dataset_name == "fico") return 1000;
  if (dataset_name == "covtype") return 500;
  fail("config", "no default epoch count for dataset '" + dataset_name +
                     "'; set train.epochs explicitly");
}

SpamModel build_model(const RunConfig& cfg, const DatasetSplit& data, LossKind loss) {
  RankSpec spec;
  spec.degree = cfg.degree;
  spec.ranks = cfg.ranks;
  spec.validate();
  const int classes = loss == LossKind::SoftmaxCrossEntropy ? data.num_classes : 1;
  SpamModel model;
  model.convex_mode = cfg.train.convex_mode;
  const std::uint64_t init_seed = derive_seed(cfg.train.seed, 0x1217);
  if (cfg.neural) {
    model.nets = init_bank(cfg.arch, data.dims(), cfg.degree, cfg.subnets,
                           derive_seed(cfg.train.seed, 0xBA27), cfg.tied);
    model.poly = SpamParams::random_init(model.nets->expanded_dim(), classes, spec, init_seed,
                                         cfg.train.convex_mode);
  } else {
    model.poly =
        SpamParams::random_init(data.dims(), classes, spec, init_seed, cfg.train.convex_mode);
  }
  return model;
}

json metrics_json(const DatasetSplit& data, const std::string& split, double value,
                  Index n_rows, std::uint64_t seed) {
  // fixed field set; nlohmann orders keys alphabetically, so the document is
  // byte-stable for identical inputs
  json j;
  j["task"] = task_kind_name(data.task);
  j["metric_name"] = metric_name(data.task);
  j["value"] = value;
  j["n_test"] = n_rows;
  j["seed"] = seed;
  return j;
}

void write_history(const std::vector<EpochRecord>& history, const std::string& path) {
  std::ostringstream ss;
  for (const auto& rec : history) {
    json line;
    line["epoch"] = rec.epoch;
    line["train_loss"] = rec.train_loss;
    line["val_metric"] = rec.val_metric;
    line["lr"] = rec.lr;
    ss << line.dump() << "\n";
  }
  atomic_write_file(path, ss.str());
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += "\"\"";
    else q += c;
  }
  return q + "\"";
}

std::string format_double(double v) {
  json j = v;
  return j.dump();
}

}  // namespace

PreparedRun prepare_run(const RunConfig& cfg) {
  PreparedRun run{load_dataset(cfg), {}, cfg.train};
  run.train.loss_kind = resolve_loss(cfg.loss_name, run.data.task);
  if (!cfg.epochs_explicit) run.train.epochs = default_epochs(cfg.dataset_name);
  run.train.validate();
  RunConfig resolved = cfg;
  resolved.train = run.train;
  run.model = build_model(resolved, run.data, run.train.loss_kind);
  return run;
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
  PreparedRun run = prepare_run(cfg);
  TrainResult result = train(run.model, run.data, run.train);

  fs::create_directories(cfg.out_dir);
  save_model(result.model, cfg.out_dir + "/model.json");
  write_history(result.history, cfg.out_dir + "/history.jsonl");

  const double test_metric = evaluate_split(result.model, run.data, "test");
  const json metrics = metrics_json(run.data, "test", test_metric, run.data.x_test.rows(),
                                    run.train.seed);
  atomic_write_file(cfg.out_dir + "/metrics.json", metrics.dump(2) + "\n");
  out << metrics.dump(2) << "\n";
  return 0;
}

int cmd_eval(const std::string& model_path, const RunConfig& cfg, const std::string& split,
             std::ostream& out) {
  const SpamModel model = load_model(model_path);
  const DatasetSplit data = load_dataset(cfg);
  require(model.input_dim() == data.dims(), "schema",
          "eval: model expects " + std::to_string(model.input_dim()) + " features, dataset has " +
              std::to_string(data.dims()));
  const double value = evaluate_split(model, data, split);
  const Index n = split == "train" ? data.x_train.rows()
               : split == "val"   ? data.x_val.rows()
                                  : data.x_test.rows();
  const json metrics = metrics_json(data, split, value, n, cfg.train.seed);
  out << metrics.dump(2) << "\n";
  return 0;
}

int cmd_explain(const ExplainRequest& req, std::ostream& out) {
  const SpamModel model = load_model(req.model_path);
  require(req.top_terms >= 0, "config", "explain: top-terms must be nonnegative");

  Vector x;
  if (req.input) {
    x = *req.input;
  } else {
    require(req.row.has_value(), "config", "explain: provide an input vector or a dataset row");
    require(req.config.has_value(), "config", "explain: --row needs a dataset config");
    const DatasetSplit data = load_dataset(*req.config);
    const Matrix& m = req.split == "train" ? data.x_train
                    : req.split == "val"   ? data.x_val
                                           : data.x_test;
    require(*req.row >= 0 && *req.row < m.rows(), "config", "explain: row out of range");
    x = m.row(*req.row).transpose();
  }

  const Explanation ex = model.neural()
                             ? neural_explain(model.poly, *model.nets, x, req.class_index)
                             : explain(model.poly, x, req.class_index);

  const size_t shown = std::min(static_cast<size_t>(req.top_terms), ex.terms.size());
  double residual = 0.0;
  for (size_t i = shown; i < ex.terms.size(); ++i) residual += ex.terms[i].contribution;

  out << "kind,i,j,contribution\n";
  out << "bias,,," << format_double(ex.bias) << "\n";
  for (size_t i = 0; i < shown; ++i) {
    const auto& t = ex.terms[i];
    out << term_kind_name(t.kind) << "," << t.i << ",";
    if (t.j >= 0) out << t.j;
    out << "," << format_double(t.contribution) << "\n";
  }
  out << "residual,,," << format_double(residual) << "\n";
  return 0;
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out) {
  const VerifyReport report = run_verification(opts);
  json j;
  j["trials"] = report.trials;
  j["max_forward_dev"] = report.max_forward_dev;
  j["max_grad_rel_err"] = report.max_grad_rel_err;
  j["forward_tol"] = report.forward_tol;
  j["grad_tol"] = report.grad_tol;
  j["pass"] = report.pass;
  out << j.dump(2) << "\n";
  return report.pass ? 0 : 1;
}

int cmd_spectra(const std::string& model_path, const std::string& out_dir, std::ostream& out) {
  const SpamModel model = load_model(model_path);
  const SpamParams& p = model.poly;
  if (p.degree() < 2)
    fail("unsupported", "spectra: order-1 model has no higher-order spectrum");

  std::ostringstream csv;
  csv << "class,order,rank_index,lambda_abs\n";
  std::vector<std::vector<double>> sequences;
  for (int c = 0; c < p.num_classes; ++c) {
    for (int l = 2; l <= p.degree(); ++l) {
      std::vector<double> seq(static_cast<size_t>(p.rank_spec.rank_at(l)));
      for (int i = 0; i < p.rank_spec.rank_at(l); ++i) seq[static_cast<size_t>(i)] =
          std::abs(p.lambdas(l)(c, i));
      std::sort(seq.begin(), seq.end(), std::greater<double>());
      for (size_t i = 0; i < seq.size(); ++i)
        csv << c << "," << l << "," << (i + 1) << "," << format_double(seq[i]) << "\n";
      sequences.push_back(std::move(seq));
    }
  }
  const SpectralFit fit = spectral_fit(sequences);
  json jfit;
  jfit["c1"] = fit.c1;
  jfit["c2"] = fit.c2;
  jfit["gamma"] = fit.gamma;
  jfit["residual"] = fit.residual;

  fs::create_directories(out_dir);
  atomic_write_file(out_dir + "/spectra.csv", csv.str());
  atomic_write_file(out_dir + "/spectral_fit.json", jfit.dump(2) + "\n");
  out << jfit.dump(2) << "\n";
  return 0;
}

int cmd_search(const std::string& space_path, const RunConfig& base, int n_trials, int threads,
               std::uint64_t master_seed, std::ostream& out) {
  const SearchSpace space = SearchSpace::from_json_file(space_path);

  // dataset loaded once; trials share it read-only
  const DatasetSplit data = load_dataset(base);
  const LossKind loss = resolve_loss(base.loss_name, data.task);
  const bool higher_better = metric_higher_is_better(data.task);

  auto make_config = [&](const TrialParams& t) {
    RunConfig cfg = base;
    if (t.lr) cfg.train.lr0 = *t.lr;
    if (t.weight_decay) cfg.train.weight_decay = *t.weight_decay;
    if (t.lambda_dropout) cfg.train.lambda_dropout_p = *t.lambda_dropout;
    if (t.ranks) {
      cfg.ranks = *t.ranks;
      cfg.degree = static_cast<int>(t.ranks->size()) + 1;
    }
    cfg.train.seed = t.seed;
    return cfg;
  };

  auto runner = [&](const TrialParams& t) -> TrialOutcome {
    RunConfig cfg = make_config(t);
    TrainConfig tc = cfg.train;
    tc.loss_kind = loss;
    if (!cfg.epochs_explicit) tc.epochs = default_epochs(cfg.dataset_name);
    tc.validate();
    const SpamModel init = build_model(cfg, data, loss);
    const TrainResult result = train(init, data, tc);
    return {result.best_val, evaluate_split(result.model, data, "test")};
  };

  const auto records = run_search(space, n_trials, master_seed, threads, runner);

  fs::create_directories(base.out_dir);
  std::ostringstream csv;
  csv << "trial,seed,lr,weight_decay,lambda_dropout,ranks,status,val_metric,test_metric,"
         "wall_seconds\n";
  for (const auto& rec : records) {
    const auto& t = rec.params;
    std::string ranks_str;
    if (t.ranks) {
      for (size_t i = 0; i < t.ranks->size(); ++i)
        ranks_str += (i ? "|" : "") + std::to_string((*t.ranks)[i]);
    }
    csv << t.id << "," << t.seed << ","
        << (t.lr ? format_double(*t.lr) : "") << ","
        << (t.weight_decay ? format_double(*t.weight_decay) : "") << ","
        << (t.lambda_dropout ? format_double(*t.lambda_dropout) : "") << ","
        << ranks_str << ","
        << (rec.failed ? "failed" : "ok") << ","
        << (rec.failed ? "" : format_double(rec.val_metric)) << ","
        << (rec.failed ? "" : format_double(rec.test_metric)) << ","
        << format_double(rec.wall_seconds) << "\n";
    if (rec.failed)
      std::cerr << "trial " << t.id << " failed: " << csv_quote(rec.error) << "\n";
  }
  atomic_write_file(base.out_dir + "/trials.csv", csv.str());

  const int best = best_trial(records, higher_better);
  if (best < 0) fail("numeric", "search: every trial failed");
  const auto& rec = records[static_cast<size_t>(best)];

  RunConfig best_cfg = make_config(rec.params);
  json jbest;
  jbest["trial"] = rec.params.id;
  jbest["val_metric"] = rec.val_metric;
  jbest["test_metric"] = rec.test_metric;
  jbest["config"] = best_cfg.to_json();
  atomic_write_file(base.out_dir + "/best_config.json", jbest.dump(2) + "\n");
  out << jbest.dump(2) << "\n";
  return 0;
}

int emit_error(const std::exception& e, std::ostream& out) {
  std::string kind = "internal";
  if (const auto* err = dynamic_cast<const Error*>(&e)) kind = err->kind();
  json j;
  j["error"] = {{"kind", kind}, {"message", e.what()}};
  out << j.dump(2) << "\n";
  return kind == "io" ? 2 : 1;
}

}  // namespace spam::cli
