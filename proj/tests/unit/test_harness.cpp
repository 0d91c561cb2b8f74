#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "imbench/harness.hpp"
#include "imbench/hpo.hpp"
#include "imbench/results.hpp"

using namespace imbench;
using doctest::Approx;

namespace {

const char* kSweepConfig = R"({
  "targets": [
    {"name": "flat", "synth": {"n_samples": 300, "n_classes": 3, "n_features": 4, "seed": 1}},
    {"name": "skewed", "synth": {"n_samples": 300, "n_classes": 4, "n_features": 4,
                                 "imbalance_ratio": 8.0, "seed": 2}}
  ],
  "filter_thresholds": [1, 30],
  "weightings": ["none", "inverse"],
  "families": ["dt"],
  "n_runs": 3,
  "base_seed": 100,
  "hyperparams": {"dt": {"max_depth": 4}}
})";

// Eight corners of a cube labelled by parity, with small jitter.
Dataset parity_data(std::size_t per_corner, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.1);
  Dataset d;
  d.features.resize(static_cast<Eigen::Index>(8 * per_corner), 3);
  Eigen::Index row = 0;
  for (int corner = 0; corner < 8; ++corner) {
    for (std::size_t i = 0; i < per_corner; ++i, ++row) {
      int parity = 0;
      for (int b = 0; b < 3; ++b) {
        const int bit = corner >> b & 1;
        parity ^= bit;
        d.features(row, b) = bit + g(rng);
      }
      d.labels.push_back(parity);
    }
  }
  d.class_names = {"even", "odd"};
  d.feature_names = {"x0", "x1", "x2"};
  return d;
}

Dataset separated_data(std::size_t per_class) {
  Dataset d;
  d.features.resize(static_cast<Eigen::Index>(2 * per_class), 1);
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const int y = i < per_class ? 0 : 1;
    d.labels.push_back(y);
    d.features(static_cast<Eigen::Index>(i), 0) = (y ? 10.0 : -10.0) + 0.01 * static_cast<double>(i % 7);
  }
  d.class_names = {"a", "b"};
  d.feature_names = {"x"};
  return d;
}

BlockResult sample_row(int i) {
  BlockResult r;
  r.classifier = i % 2 ? "gbt-effective" : "dt-none";
  r.target = "t,\"quoted\"";
  r.filter_threshold = static_cast<std::size_t>(i + 1);
  r.seed = 1000 + static_cast<std::uint64_t>(i);
  r.n_train = 77;
  r.n_classes = 3;
  r.imbalance = {0.1 * i + 1.0 / 3.0, 2.5, 0.9876543210123};
  r.accuracy = 1.0 / 7.0;
  r.macro_f1 = 0.123456789012345678;
  r.weighted_f1 = 2.0 / 3.0;
  r.train_seconds = 1e-5 * i;
  return r;
}

}  // namespace

TEST_CASE("classifier ids") {
  const auto id = ClassifierId::parse("gbt-effective");
  CHECK(id.family == ModelFamily::Gbt);
  CHECK(id.weighting == WeightingStrategy::Effective);
  CHECK(id.name() == "gbt-effective");
  CHECK_THROWS(ClassifierId::parse("svm-none"));
  CHECK_THROWS(ClassifierId::parse("dt"));
}

TEST_CASE("config parsing") {
  const auto cfg = ExperimentConfig::parse(kSweepConfig);
  CHECK(cfg.targets.size() == 2);
  CHECK(cfg.classifiers().size() == 2);
  CHECK(cfg.n_runs == 3);
  CHECK(std::get<TreeParams>(cfg.params_for(ClassifierId::parse("dt-none"))).max_depth == 4);
  CHECK(cfg.beta_for(ClassifierId::parse("dt-inverse")) == kDefaultEffectiveBeta);

  CHECK_THROWS_AS(ExperimentConfig::parse(R"({"targets": [], "bogus": 1})"), InvalidArgument);
  CHECK_THROWS_AS(ExperimentConfig::parse(R"({"targets": [{"name": "x", "synth": {"n_samples": 10, "typo": 1}}]})"),
                  InvalidArgument);
  CHECK_THROWS_AS(ExperimentConfig::parse("{not json"), InvalidArgument);
  CHECK_THROWS_AS(ExperimentConfig::parse(R"({"targets": [{"name": "x", "synth": {}}], "weightings": ["fancy"]})"),
                  InvalidArgument);

  const auto over = ExperimentConfig::parse(R"({
    "targets": [{"name": "x", "synth": {"n_samples": 50}}],
    "classifier_overrides": {"dt-effective": {"beta": 0.0, "hyperparams": {"max_depth": 2}}}
  })");
  const auto dup = ClassifierId::parse("dt-effective");
  CHECK(over.beta_for(dup) == 0.0);
  CHECK(std::get<TreeParams>(over.params_for(dup)).max_depth == 2);
}

TEST_CASE("sweep shape, order and summaries") {
  const auto cfg = ExperimentConfig::parse(kSweepConfig);
  const SweepOutput out = run_sweep(cfg);
  REQUIRE(out.rows.size() == 2 * 2 * 2 * 3);
  CHECK(out.summary.size() == 8);
  for (std::size_t i = 1; i < out.rows.size(); ++i) CHECK_FALSE(block_key_less(out.rows[i], out.rows[i - 1]));

  std::set<std::uint64_t> seeds;
  for (const auto& r : out.rows) {
    CHECK(r.status == "ok");
    seeds.insert(r.seed);
    CHECK(r.accuracy >= 0.0);
    CHECK(r.accuracy <= 1.0);
  }
  CHECK(seeds == std::set<std::uint64_t>{100, 101, 102});

  // recompute each summary cell from the raw rows
  for (const auto& s : out.summary) {
    std::vector<double> f1;
    for (const auto& r : out.rows) {
      if (r.classifier == s.classifier && r.target == s.target && r.filter_threshold == s.filter_threshold) {
        f1.push_back(r.weighted_f1);
      }
    }
    REQUIRE(f1.size() == 3);
    const double mean = (f1[0] + f1[1] + f1[2]) / 3.0;
    double ss = 0;
    for (double v : f1) ss += (v - mean) * (v - mean);
    CHECK(s.n_runs == 3);
    CHECK(std::abs(s.weighted_f1_mean - mean) < 1e-12);
    CHECK(std::abs(s.weighted_f1_std - std::sqrt(ss / 2.0)) < 1e-12);
  }

  // high threshold on the skewed target keeps the larger classes only
  for (const auto& r : out.rows) {
    if (r.target == "skewed" && r.filter_threshold == 30) CHECK(r.n_classes < 4);
    if (r.target == "flat") CHECK(r.n_classes == 3);
  }

  SUBCASE("deterministic replay, also with more workers") {
    ExperimentConfig again = cfg;
    again.workers = 3;
    const SweepOutput replay = run_sweep(again);
    REQUIRE(replay.rows.size() == out.rows.size());
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
      BlockResult a = out.rows[i];
      BlockResult b = replay.rows[i];
      a.train_seconds = b.train_seconds = 0.0;
      CHECK(a == b);
    }
  }

  SUBCASE("pivot gives a valid block matrix") {
    std::vector<std::string> dropped;
    const BlockMatrix m = pivot_results(out.rows, Metric::WeightedF1, &dropped);
    CHECK_NOTHROW(m.validate());
    CHECK(m.n_treatments() == 2);
    CHECK(m.n_blocks() == 4);
    CHECK(dropped.empty());
  }

  SUBCASE("degradation table") {
    std::ostringstream os;
    write_degradation(out.summary, os);
    const std::string text = os.str();
    CHECK(text.rfind("classifier,target,filter_threshold,cvcf,ir,necd,", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 9);
  }
}

TEST_CASE("weighting none passes unit weights and inverse matches the training counts") {
  SynthConfig sc;
  sc.n_samples = 200;
  sc.n_classes = 3;
  sc.class_counts = {120, 50, 30};
  const Dataset d = synth_generate(sc);
  BlockSpec spec;
  spec.target = "x";
  spec.params = TreeParams{};
  spec.seed = 4;
  spec.classifier = ClassifierId::parse("dt-none");
  const auto none = run_block_detailed(d, spec);
  CHECK(none.weights.weights == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(none.result.n_train == 120);

  spec.classifier = ClassifierId::parse("dt-inverse");
  const auto inv = run_block_detailed(d, spec);
  // 60% of each class goes to training: 72, 30, 18
  CHECK(inv.weights[0] == Approx(120.0 / (3 * 72.0)));
  CHECK(inv.weights[1] == Approx(120.0 / (3 * 30.0)));
  CHECK(inv.weights[2] == Approx(120.0 / (3 * 18.0)));
}

TEST_CASE("degenerate blocks are reported as skipped rows") {
  SynthConfig sc;
  sc.n_samples = 103;
  sc.n_classes = 3;
  sc.class_counts = {60, 41, 2};
  const Dataset d = synth_generate(sc);
  BlockSpec spec;
  spec.target = "x";
  spec.classifier = ClassifierId::parse("dt-none");

  spec.filter_threshold = 1;  // a 2-sample class cannot fill three splits
  const auto tiny = run_block(d, spec);
  CHECK(tiny.status == "skipped");
  CHECK_FALSE(tiny.reason.empty());

  spec.filter_threshold = 3;  // the tiny class is filtered out
  CHECK(run_block(d, spec).status == "ok");
  CHECK(run_block(d, spec).n_classes == 2);

  spec.filter_threshold = 50;  // one class left
  const auto single = run_block(d, spec);
  CHECK(single.status == "skipped");
  CHECK(single.reason.find("degenerate") != std::string::npos);
}

TEST_CASE("results CSV round-trip") {
  std::vector<BlockResult> rows;
  for (int i = 0; i < 5; ++i) rows.push_back(sample_row(i));
  rows[3].status = "skipped";
  rows[3].reason = "degenerate after filtering: 1 class(es), see \"log\"";
  std::stringstream io;
  write_results(rows, io);
  const auto back = read_results(io);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(back[i] == rows[i]);

  std::stringstream empty;
  write_results({}, empty);
  CHECK(read_results(empty).empty());

  std::stringstream bad("classifier,target\nx,y\n");
  CHECK_THROWS(read_results(bad));
}

TEST_CASE("summaries ignore rows that did not complete") {
  std::vector<BlockResult> rows{sample_row(0), sample_row(0), sample_row(0)};
  rows[1].weighted_f1 = 0.0;
  rows[1].status = "failed";
  rows[2].weighted_f1 = 1.0;
  const auto s = summarize(rows);
  REQUIRE(s.size() == 1);
  CHECK(s[0].n_runs == 2);
  CHECK(s[0].weighted_f1_mean == Approx((2.0 / 3.0 + 1.0) / 2.0));
}

TEST_CASE("pivot drops blocks missing a classifier") {
  std::vector<BlockResult> rows;
  for (std::size_t thr : {1, 2, 3}) {
    for (const char* c : {"dt-none", "rf-none"}) {
      BlockResult r = sample_row(0);
      r.target = "t";
      r.classifier = c;
      r.filter_threshold = thr;
      r.weighted_f1 = 0.1 * static_cast<double>(thr);
      rows.push_back(r);
    }
  }
  rows.back().status = "failed";  // rf-none at threshold 3
  std::vector<std::string> dropped;
  const auto m = pivot_results(rows, Metric::WeightedF1, &dropped);
  CHECK(m.n_blocks() == 2);
  CHECK(dropped.size() == 1);
  CHECK(m.values(1, 0) == Approx(0.2));
}

TEST_CASE("default threshold ladder") {
  SynthConfig sc;
  sc.n_classes = 3;
  sc.class_counts = {500, 60, 7};
  sc.n_samples = 567;
  const auto ladder = default_threshold_ladder(synth_generate(sc));
  CHECK(ladder == std::vector<std::size_t>{1, 2, 5, 10, 20, 50});
}

TEST_CASE("hyperparameter search") {
  HpoSpec spec;
  spec.n_trials = 1;
  spec.cv_folds = 3;
  const Dataset sep = separated_data(60);
  const auto one = hpo_random_search(ModelFamily::DecisionTree, spec, sep, 1);
  CHECK(one.trials.size() == 1);
  CHECK(one.best_trial == 0);

  // every configuration separates the data perfectly: the first trial wins the tie
  spec.n_trials = 6;
  const auto tie = hpo_random_search(ModelFamily::DecisionTree, spec, sep, 2);
  CHECK(tie.best_score == 1.0);
  CHECK(tie.best_trial == 0);

  // same seed, same search
  const auto a = hpo_random_search(ModelFamily::DecisionTree, spec, parity_data(40, 3), 9);
  const auto b = hpo_random_search(ModelFamily::DecisionTree, spec, parity_data(40, 3), 9);
  CHECK(a.best_trial == b.best_trial);
  CHECK(hyperparams_to_json(a.best) == hyperparams_to_json(b.best));

  spec.n_trials = 0;
  CHECK_THROWS_AS(hpo_random_search(ModelFamily::DecisionTree, spec, sep, 1), InvalidArgument);
}

TEST_CASE("search recovers a planted depth requirement") {
  // three-way parity cannot be fit below depth 3
  const Dataset d = parity_data(50, 11);
  HpoSpec spec;
  spec.n_trials = 10;
  spec.cv_folds = 3;
  int deep_enough = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const auto r = hpo_random_search(ModelFamily::DecisionTree, spec, d, 1000 + rep);
    if (std::get<TreeParams>(r.best).max_depth >= 3) ++deep_enough;
    int pruned = 0;
    for (const auto& t : r.trials) pruned += t.status == Trial::Status::Pruned ? 1 : 0;
    for (int i = 0; i < spec.startup_trials; ++i) CHECK(r.trials[static_cast<std::size_t>(i)].status != Trial::Status::Pruned);
    CHECK(pruned <= spec.n_trials - spec.startup_trials);
  }
  CHECK(deep_enough >= 18);
}
