#include "spam/search.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include <nlohmann/json.hpp>

#include "spam/model_io.hpp"

namespace spam {

using nlohmann::json;

SearchSpace SearchSpace::from_json_file(const std::string& path) {
  const json j = load_json_file(path);
  SearchSpace s;
  auto log_uniform = [&](const char* key) -> std::optional<LogUniform> {
    if (!j.contains(key)) return std::nullopt;
    const auto& e = j.at(key);
    require(e.value("kind", "log_uniform") == "log_uniform", "config",
            std::string("search space: ") + key + " must be log_uniform");
    return LogUniform{e.at("lo").get<double>(), e.at("hi").get<double>()};
  };
  s.lr = log_uniform("lr");
  s.weight_decay = log_uniform("weight_decay");
  if (j.contains("lambda_dropout")) {
    const auto& e = j.at("lambda_dropout");
    require(e.value("kind", "uniform") == "uniform", "config",
            "search space: lambda_dropout must be uniform");
    s.lambda_dropout = Uniform{e.at("lo").get<double>(), e.at("hi").get<double>()};
  }
  if (j.contains("ranks")) {
    const auto& e = j.at("ranks");
    require(e.value("kind", "choice") == "choice", "config", "search space: ranks must be choice");
    s.ranks = e.at("values").get<std::vector<std::vector<int>>>();
  }
  s.validate();
  return s;
}

void SearchSpace::validate() const {
  auto check_log = [](const std::optional<LogUniform>& li, const char* name) {
    if (!li) return;
    require(li->lo > 0.0 && li->hi >= li->lo, "config",
            std::string("search space: ") + name + " interval must satisfy 0 < lo <= hi");
  };
  check_log(lr, "lr");
  check_log(weight_decay, "weight_decay");
  if (lambda_dropout)
    require(lambda_dropout->lo >= 0.0 && lambda_dropout->hi <= 1.0 &&
                lambda_dropout->lo <= lambda_dropout->hi,
            "config", "search space: lambda_dropout interval must lie within [0, 1]");
  if (ranks) {
    require(!ranks->empty(), "config", "search space: ranks choice set is empty");
    for (const auto& r : *ranks) {
      require(!r.empty(), "config", "search space: empty rank vector");
      for (int v : r) require(v >= 1, "config", "search space: ranks must be >= 1");
    }
  }
}

std::vector<TrialParams> sample_trials(const SearchSpace& space, int n_trials,
                                       std::uint64_t master_seed) {
  require(n_trials >= 1, "config", "search: n_trials must be >= 1");
  space.validate();
  Rng rng(derive_seed(master_seed, 0x5EA7C4));
  std::vector<TrialParams> trials;
  trials.reserve(static_cast<size_t>(n_trials));
  for (int t = 0; t < n_trials; ++t) {
    TrialParams p;
    p.id = t;
    p.seed = derive_seed(master_seed, 1000 + static_cast<std::uint64_t>(t));
    if (space.lr) p.lr = rng.log_uniform(space.lr->lo, space.lr->hi);
    if (space.weight_decay)
      p.weight_decay = rng.log_uniform(space.weight_decay->lo, space.weight_decay->hi);
    if (space.lambda_dropout)
      p.lambda_dropout = rng.uniform(space.lambda_dropout->lo, space.lambda_dropout->hi);
    if (space.ranks)
      p.ranks = (*space.ranks)[static_cast<size_t>(rng.below(space.ranks->size()))];
    trials.push_back(std::move(p));
  }
  return trials;
}

std::vector<TrialRecord> run_search(const SearchSpace& space, int n_trials,
                                    std::uint64_t master_seed, int threads,
                                    const TrialRunner& runner) {
  const auto trials = sample_trials(space, n_trials, master_seed);
  std::vector<TrialRecord> records(trials.size());
  std::atomic<size_t> next{0};
  const int workers = std::max(1, std::min(threads, n_trials));

  auto work = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= trials.size()) return;
      TrialRecord rec;
      rec.params = trials[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const TrialOutcome out = runner(trials[i]);
        rec.val_metric = out.val_metric;
        rec.test_metric = out.test_metric;
        rec.failed = !std::isfinite(out.val_metric);
        if (rec.failed) rec.error = "non-finite validation metric";
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
      }
      rec.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      records[i] = std::move(rec);
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return records;
}

int best_trial(const std::vector<TrialRecord>& records, bool higher_is_better) {
  int best = -1;
  for (size_t i = 0; i < records.size(); ++i) {
    if (records[i].failed) continue;
    if (best < 0 ||
        (higher_is_better ? records[i].val_metric > records[static_cast<size_t>(best)].val_metric
                          : records[i].val_metric < records[static_cast<size_t>(best)].val_metric))
      best = static_cast<int>(i);
  }
  return best;
}

}  // namespace spam
