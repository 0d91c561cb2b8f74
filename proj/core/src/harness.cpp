#include "imbench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "imbench/log.hpp"

namespace imbench {

BlockOutcome run_block_detailed(const Dataset& data, const BlockSpec& spec) {
  BlockOutcome out;
  BlockResult& r = out.result;
  r.classifier = spec.classifier.name();
  r.target = spec.target;
  r.filter_threshold = spec.filter_threshold;
  r.seed = spec.seed;

  Dataset train, validation, test;
  try {
    const Dataset filtered = filter_min_class_count(data, spec.filter_threshold);
    const SplitIndices split = stratified_split(filtered, spec.split, spec.seed);
    train = filtered.subset(split.train);
    validation = filtered.subset(split.validation);
    test = filtered.subset(split.test);
    const auto dist = LabelDistribution::of(train.labels, train.n_classes());
    r.n_train = train.rows();
    r.n_classes = train.n_classes();
    r.imbalance = imbalance_report(dist);
    out.weights = compute_weights(spec.classifier.weighting, dist, spec.beta);
  } catch (const Error& e) {
    r.status = "skipped";
    r.reason = e.what();
    return out;
  }

  try {
    const TrainedModel model = fit_classifier(spec.params, train, &validation, out.weights, spec.seed);
    const Labels pred = model.predict(test.features);
    const ConfusionMatrix cm = confusion(test.labels, pred, test.n_classes());
    out.test_report = f1_scores(cm);
    r.accuracy = accuracy(cm);
    r.macro_f1 = out.test_report.macro_f1;
    r.weighted_f1 = out.test_report.weighted_f1;
    r.train_seconds = model.train_seconds;
  } catch (const std::exception& e) {
    r.status = "failed";
    r.reason = e.what();
  }
  return out;
}

BlockResult run_block(const Dataset& data, const BlockSpec& spec) {
  return run_block_detailed(data, spec).result;
}

namespace {

// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
// is rethrown after all threads finish.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, n); ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::string hpo_key(const ClassifierId& id, const std::string& target, std::optional<std::size_t> threshold) {
  std::string key = id.name() + "/" + target;
  if (threshold) key += "@" + std::to_string(*threshold);
  return key;
}

}  // namespace

SweepOutput run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const int workers = cfg.sequential_timing ? 1 : cfg.workers;

  std::vector<Dataset> datasets;
  std::vector<std::vector<std::size_t>> thresholds;
  for (const auto& t : cfg.targets) {
    datasets.push_back(load_target(t));
    thresholds.push_back(cfg.filter_thresholds.empty() ? default_threshold_ladder(datasets.back())
                                                       : cfg.filter_thresholds);
    log::info("target " + t.name + ": " + std::to_string(datasets.back().rows()) + " rows, " +
              std::to_string(thresholds.back().size()) + " thresholds");
  }
  const auto classifiers = cfg.classifiers();

  SweepOutput out;
  std::map<std::string, HyperParams> tuned;
  if (cfg.hpo.enabled) {
    struct Task {
      ClassifierId id;
      std::size_t target;
      std::optional<std::size_t> threshold;
    };
    std::vector<Task> tasks;
    for (std::size_t t = 0; t < cfg.targets.size(); ++t) {
      if (thresholds[t].empty()) continue;
      for (const auto& id : classifiers) {
        if (cfg.hpo.retune_per_threshold) {
          for (auto thr : thresholds[t]) tasks.push_back({id, t, thr});
        } else {
          tasks.push_back({id, t, std::nullopt});
        }
      }
    }
    std::vector<std::optional<HpoResult>> results(tasks.size());
    parallel_for(tasks.size(), workers, [&](std::size_t i) {
      const Task& task = tasks[i];
      const std::size_t thr = task.threshold.value_or(thresholds[task.target].front());
      const std::string key = hpo_key(task.id, cfg.targets[task.target].name, task.threshold);
      try {
        const Dataset filtered = filter_min_class_count(datasets[task.target], thr);
        const auto split = stratified_split(filtered, cfg.split, cfg.base_seed);
        HpoSpec spec;
        spec.n_trials = cfg.hpo.n_trials;
        spec.cv_folds = cfg.hpo.cv_folds;
        spec.weighting = task.id.weighting;
        spec.beta = cfg.beta_for(task.id);
        results[i] = hpo_random_search(task.id.family, spec, filtered.subset(split.train), cfg.hpo.seed);
      } catch (const std::exception& e) {
        log::warn("hpo " + key + " failed, using defaults: " + e.what());
      }
    });
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (!results[i]) continue;
      const std::string key = hpo_key(tasks[i].id, cfg.targets[tasks[i].target].name, tasks[i].threshold);
      tuned[key] = results[i]->best;
      out.hpo.emplace(key, std::move(*results[i]));
    }
  }

  struct Job {
    std::size_t target;
    BlockSpec spec;
  };
  std::vector<Job> jobs;
  for (std::size_t t = 0; t < cfg.targets.size(); ++t) {
    for (auto thr : thresholds[t]) {
      for (const auto& id : classifiers) {
        HyperParams params = cfg.params_for(id);
        const auto key = hpo_key(id, cfg.targets[t].name,
                                 cfg.hpo.retune_per_threshold ? std::optional<std::size_t>(thr) : std::nullopt);
        if (auto it = tuned.find(key); it != tuned.end()) params = it->second;
        for (int run = 0; run < cfg.n_runs; ++run) {
          BlockSpec spec;
          spec.target = cfg.targets[t].name;
          spec.filter_threshold = thr;
          spec.classifier = id;
          spec.seed = cfg.base_seed + static_cast<std::uint64_t>(run);
          spec.params = params;
          spec.split = cfg.split;
          spec.beta = cfg.beta_for(id);
          jobs.push_back({t, std::move(spec)});
        }
      }
    }
  }

  out.rows.resize(jobs.size());
  std::atomic<std::size_t> done{0};
  parallel_for(jobs.size(), workers, [&](std::size_t i) {
    out.rows[i] = run_block(datasets[jobs[i].target], jobs[i].spec);
    const std::size_t n = ++done;
    if (!out.rows[i].ok()) {
      log::warn(out.rows[i].classifier + " on " + out.rows[i].target + "@" +
                std::to_string(out.rows[i].filter_threshold) + " " + out.rows[i].status + ": " +
                out.rows[i].reason);
    }
    log::debug("block " + std::to_string(n) + "/" + std::to_string(jobs.size()) + " done");
  });
  std::sort(out.rows.begin(), out.rows.end(), block_key_less);
  out.summary = summarize(out.rows);
  return out;
}

}  // namespace imbench
