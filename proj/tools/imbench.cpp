// imbench command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "imbench/dataset.hpp"
#include "imbench/eval.hpp"
#include "imbench/harness.hpp"
#include "imbench/hpo.hpp"
#include "imbench/imbalance.hpp"
#include "imbench/log.hpp"
#include "imbench/model.hpp"
#include "imbench/rank_stats.hpp"
#include "imbench/results.hpp"
#include "imbench/weighting.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace imbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

// --- dataset source shared by several subcommands ----------------------------

struct Source {
  std::string csv;
  std::string label = "label";
  std::string schema;

  void add_options(CLI::App& app) {
    app.add_option("--csv", csv, "Input CSV file")->required()->check(CLI::ExistingFile);
    app.add_option("--label", label, "Label column (other columns inferred)")->capture_default_str();
    app.add_option("--schema", schema, "Column schema JSON (overrides --label)")->check(CLI::ExistingFile);
  }

  ColumnSchema column_schema() const {
    if (!schema.empty()) return ColumnSchema::load(schema);
    if (label.empty()) throw InvalidArgument("give --label or --schema");
    return ColumnSchema::infer(csv, label);
  }

  Dataset load() const { return preprocess(load_csv(csv, column_schema())); }
};

void write_json_file(const json& j, const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path.string());
  f << j.dump(2) << '\n';
  if (!f) throw IoError("write failed: " + path.string());
}

json imbalance_json(const ImbalanceReport& r) {
  return {{"cvcf", r.cvcf}, {"ir", r.ir}, {"necd", r.necd}};
}

json hpo_json(const HpoResult& r) {
  json trials = json::array();
  for (const auto& t : r.trials) {
    trials.push_back({{"index", t.index},
                      {"status", std::string(to_string(t.status))},
                      {"mean_score", t.mean_score},
                      {"fold_scores", t.fold_scores},
                      {"params", hyperparams_to_json(t.params)},
                      {"error", t.error}});
  }
  return {{"best_trial", r.best_trial},
          {"best_score", r.best_score},
          {"best", hyperparams_to_json(r.best)},
          {"trials", trials}};
}

// --- inspect -----------------------------------------------------------------

struct InspectOptions {
  std::string csv;
  std::vector<std::string> labels{"label"};
  bool as_json = false;
};

int run_inspect(const InspectOptions& o) {
  json out = json::array();
  for (const auto& label : o.labels) {
    const RawDataset raw = load_csv(o.csv, ColumnSchema::infer(o.csv, label));
    if (raw.class_names.size() < 2) {
      throw DataError("label '" + label + "' has fewer than two classes");
    }
    const auto dist = LabelDistribution::of(raw.labels, static_cast<int>(raw.class_names.size()));
    const ImbalanceReport rep = imbalance_report(dist);
    json classes = json::array();
    for (std::size_t k = 0; k < raw.class_names.size(); ++k) {
      classes.push_back({{"name", raw.class_names[k]}, {"count", dist.counts()[k]}});
    }
    out.push_back({{"label", label},
                   {"rows", raw.rows()},
                   {"unlabelled_rows", raw.skipped_unlabelled},
                   {"n_classes", dist.n_classes()},
                   {"classes", classes},
                   {"imbalance", imbalance_json(rep)}});
    if (o.as_json) continue;

    std::cout << "label " << label << ": " << raw.rows() << " rows, " << dist.n_classes() << " classes";
    if (raw.skipped_unlabelled) std::cout << " (" << raw.skipped_unlabelled << " unlabelled rows dropped)";
    std::cout << '\n';
    std::size_t width = 5;
    for (const auto& n : raw.class_names) width = std::max(width, n.size());
    for (std::size_t k = 0; k < raw.class_names.size(); ++k) {
      std::cout << "  " << std::left << std::setw(static_cast<int>(width)) << raw.class_names[k] << std::right
                << std::setw(10) << dist.counts()[k] << std::setw(10) << std::fixed << std::setprecision(4)
                << dist.frequency(static_cast<int>(k)) << '\n';
    }
    std::cout << std::fixed << std::setprecision(4) << "  cvcf " << rep.cvcf << "  ir " << rep.ir << "  necd "
              << rep.necd << "\n";
  }
  if (o.as_json) std::cout << out.dump(2) << '\n';
  return kExitOk;
}

// --- weights -----------------------------------------------------------------

struct WeightsOptions {
  Source source;
  double beta = kDefaultEffectiveBeta;
  bool as_json = false;
};

int run_weights(const WeightsOptions& o) {
  const Dataset data = o.source.load();
  const auto dist = LabelDistribution::of(data.labels, data.n_classes());
  std::vector<ClassWeights> all;
  for (auto s : kAllWeightings) all.push_back(compute_weights(s, dist, o.beta));

  if (o.as_json) {
    json out = {{"beta", o.beta}, {"classes", data.class_names}, {"counts", dist.counts()}};
    for (const auto& w : all) out["weights"][std::string(to_string(w.strategy))] = w.weights;
    std::cout << out.dump(2) << '\n';
    return kExitOk;
  }
  std::size_t width = 5;
  for (const auto& n : data.class_names) width = std::max(width, n.size());
  std::cout << std::left << std::setw(static_cast<int>(width)) << "class" << std::right << std::setw(10)
            << "count";
  for (const auto& w : all) std::cout << std::setw(12) << to_string(w.strategy);
  std::cout << '\n';
  for (int k = 0; k < data.n_classes(); ++k) {
    std::cout << std::left << std::setw(static_cast<int>(width)) << data.class_names[static_cast<std::size_t>(k)]
              << std::right << std::setw(10) << dist.counts()[static_cast<std::size_t>(k)];
    for (const auto& w : all) std::cout << std::setw(12) << std::fixed << std::setprecision(4) << w[k];
    std::cout << '\n';
  }
  std::cout << "effective beta = " << std::setprecision(6) << o.beta << '\n';
  return kExitOk;
}

// --- synth -------------------------------------------------------------------

struct SynthOptions {
  SynthConfig cfg;
  std::optional<double> ir;
  std::optional<double> gamma;
  std::string out;
  std::string label_name = "label";
};

int run_synth(SynthOptions o) {
  if (o.ir && o.gamma) throw InvalidArgument("give --gamma or --ir, not both");
  if (o.gamma) o.cfg.power_law_exponent = *o.gamma;
  if (o.ir) o.cfg.power_law_exponent = exponent_for_ratio(*o.ir, o.cfg.n_classes);
  if (!o.cfg.class_counts.empty()) {
    o.cfg.n_samples = 0;
    for (auto n : o.cfg.class_counts) o.cfg.n_samples += n;
    o.cfg.n_classes = static_cast<int>(o.cfg.class_counts.size());
  }
  const Dataset data = synth_generate(o.cfg);
  write_csv(data, o.out, o.label_name);
  const auto dist = LabelDistribution::of(data.labels, data.n_classes());
  const ImbalanceReport rep = imbalance_report(dist);
  std::cout << "wrote " << data.rows() << " rows, " << data.n_features() << " features, " << data.n_classes()
            << " classes to " << o.out << '\n';
  std::cout << "counts";
  for (auto c : dist.counts()) std::cout << ' ' << c;
  std::cout << std::fixed << std::setprecision(4) << "\ncvcf " << rep.cvcf << "  ir " << rep.ir << "  necd "
            << rep.necd << '\n';
  return kExitOk;
}

// --- train -------------------------------------------------------------------

struct TrainOptions {
  Source source;
  std::string family = "dt";
  std::string weighting = "none";
  std::string params_file;
  std::string params_inline;
  double beta = kDefaultEffectiveBeta;
  std::uint64_t seed = 0;
  std::size_t threshold = 1;
  std::string out_model;
  bool as_json = false;
};

HyperParams params_from_options(ModelFamily family, const std::string& file, const std::string& inline_json) {
  HyperParams p = default_hyperparams(family);
  if (!file.empty()) {
    std::ifstream f(file);
    if (!f) throw IoError("cannot open " + file);
    try {
      p = hyperparams_from_json(json::parse(f), p);
    } catch (const json::exception& e) {
      throw InvalidArgument(file + ": " + e.what());
    }
  }
  if (!inline_json.empty()) {
    try {
      p = hyperparams_from_json(json::parse(inline_json), p);
    } catch (const json::exception& e) {
      throw InvalidArgument(std::string("--params: ") + e.what());
    }
  }
  validate(p);
  return p;
}

int run_train(const TrainOptions& o) {
  const ClassifierId id{parse_family(o.family), parse_weighting(o.weighting)};
  const HyperParams params = params_from_options(id.family, o.params_file, o.params_inline);
  const Dataset data = filter_min_class_count(o.source.load(), o.threshold);
  const SplitIndices split = stratified_split(data, SplitFractions{}, o.seed);
  const Dataset train = data.subset(split.train);
  const Dataset validation = data.subset(split.validation);
  const Dataset test = data.subset(split.test);
  const auto dist = LabelDistribution::of(train.labels, train.n_classes());
  const ClassWeights w = compute_weights(id.weighting, dist, o.beta);

  const TrainedModel model = fit_classifier(params, train, &validation, w, o.seed);
  const ConfusionMatrix cm = confusion(test.labels, model.predict(test.features), test.n_classes());
  const F1Report f1 = f1_scores(cm);
  const double acc = accuracy(cm);

  if (!o.out_model.empty()) {
    json j = model.to_json();
    j["class_names"] = data.class_names;
    j["feature_names"] = data.feature_names;
    write_json_file(j, o.out_model);
  }
  if (o.as_json) {
    json out = {{"classifier", id.name()},
                {"seed", o.seed},
                {"n_train", train.rows()},
                {"n_test", test.rows()},
                {"imbalance", imbalance_json(imbalance_report(dist))},
                {"weights", w.weights},
                {"accuracy", acc},
                {"macro_f1", f1.macro_f1},
                {"weighted_f1", f1.weighted_f1},
                {"train_seconds", model.train_seconds},
                {"params", hyperparams_to_json(params)}};
    for (int k = 0; k < test.n_classes(); ++k) {
      const auto ku = static_cast<std::size_t>(k);
      out["per_class"].push_back({{"class", data.class_names[ku]},
                                  {"precision", f1.precision[ku]},
                                  {"recall", f1.recall[ku]},
                                  {"f1", f1.f1[ku]},
                                  {"support", f1.support[ku]}});
    }
    std::cout << out.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << id.name() << " seed " << o.seed << ": " << train.rows() << " train / " << validation.rows()
            << " validation / " << test.rows() << " test rows\n";
  std::cout << std::fixed << std::setprecision(4) << "accuracy " << acc << "  macro_f1 " << f1.macro_f1
            << "  weighted_f1 " << f1.weighted_f1 << "  train_seconds " << model.train_seconds << '\n';
  std::size_t width = 5;
  for (const auto& n : data.class_names) width = std::max(width, n.size());
  std::cout << std::left << std::setw(static_cast<int>(width)) << "class" << std::right << std::setw(11)
            << "precision" << std::setw(9) << "recall" << std::setw(9) << "f1" << std::setw(9) << "support\n";
  for (int k = 0; k < test.n_classes(); ++k) {
    const auto ku = static_cast<std::size_t>(k);
    std::cout << std::left << std::setw(static_cast<int>(width)) << data.class_names[ku] << std::right
              << std::setw(11) << f1.precision[ku] << std::setw(9) << f1.recall[ku] << std::setw(9) << f1.f1[ku]
              << std::setw(9) << f1.support[ku] << '\n';
  }
  if (!o.out_model.empty()) std::cout << "model written to " << o.out_model << '\n';
  return kExitOk;
}

// --- bench -------------------------------------------------------------------

struct BenchOptions {
  std::string config;
  std::string out_dir = "imbench-out";
  std::optional<int> workers;
  std::optional<int> runs;
  bool sequential = false;
};

int run_bench(const BenchOptions& o) {
  ExperimentConfig cfg = ExperimentConfig::load(o.config);
  if (o.workers) cfg.workers = *o.workers;
  if (o.runs) cfg.n_runs = *o.runs;
  if (o.sequential) cfg.sequential_timing = true;
  cfg.validate();

  const SweepOutput out = run_sweep(cfg);
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  write_results(out.rows, dir / "results.csv");
  write_summary(out.summary, dir / "summary.csv");
  write_degradation(out.summary, dir / "degradation.csv");
  if (!out.hpo.empty()) {
    json j = json::object();
    for (const auto& [key, r] : out.hpo) j[key] = hpo_json(r);
    write_json_file(j, dir / "hpo.json");
  }

  std::size_t ok = 0, skipped = 0, failed = 0;
  for (const auto& r : out.rows) {
    if (r.status == "ok") ++ok;
    else if (r.status == "skipped") ++skipped;
    else ++failed;
  }
  std::cout << out.rows.size() << " block results (" << ok << " ok, " << skipped << " skipped, " << failed
            << " failed), " << out.summary.size() << " summary rows\n";
  std::cout << "wrote " << (dir / "results.csv").string() << ", summary.csv, degradation.csv";
  if (!out.hpo.empty()) std::cout << ", hpo.json";
  std::cout << '\n';
  return kExitOk;
}

// --- stats -------------------------------------------------------------------

struct StatsOptions {
  std::string results;
  std::string metric = "weighted_f1";
  std::string direction;
  std::string method = "auto";
  double alpha = 0.05;
  std::string out_svg;
  std::string out_text;
  std::string out_json;
};

WilcoxonMethod parse_method(const std::string& s) {
  if (s == "auto") return WilcoxonMethod::Auto;
  if (s == "exact") return WilcoxonMethod::Exact;
  if (s == "normal") return WilcoxonMethod::Normal;
  throw InvalidArgument("unknown --method '" + s + "' (expected auto, exact or normal)");
}

int run_stats(const StatsOptions& o) {
  const Metric metric = parse_metric(o.metric);
  const Direction direction = o.direction.empty() ? natural_direction(metric) : parse_direction(o.direction);
  const WilcoxonMethod method = parse_method(o.method);

  std::vector<std::string> dropped;
  const BlockMatrix m = pivot_results(read_results(o.results), metric, &dropped);
  for (const auto& b : dropped) log::warn("block " + b + " dropped: not every classifier has an ok result");
  const RankAnalysis a = rank_analysis(m, o.alpha, direction, method);

  std::cout << render_cd_text(a);
  std::cout << "\npairwise (holm-adjusted)\n";
  for (const auto& p : a.pairs) {
    std::cout << "  " << a.treatments[static_cast<std::size_t>(p.a)] << " vs "
              << a.treatments[static_cast<std::size_t>(p.b)] << std::scientific << std::setprecision(3)
              << "  p=" << p.p_raw << "  adj=" << p.p_adjusted << (p.degenerate ? "  (identical)" : "")
              << (p.p_adjusted < a.alpha ? "  *" : "") << '\n';
  }
  std::cout << std::defaultfloat;

  if (!o.out_svg.empty()) write_cd_svg(a, o.out_svg);
  if (!o.out_text.empty()) write_cd_text(a, o.out_text);
  if (!o.out_json.empty()) {
    json pairs = json::array();
    for (const auto& p : a.pairs) {
      pairs.push_back({{"a", a.treatments[static_cast<std::size_t>(p.a)]},
                       {"b", a.treatments[static_cast<std::size_t>(p.b)]},
                       {"p_raw", p.p_raw},
                       {"p_adjusted", p.p_adjusted},
                       {"degenerate", p.degenerate}});
    }
    json cliques = json::array();
    for (const auto& c : a.cliques) {
      json names = json::array();
      for (int i : c) names.push_back(a.treatments[static_cast<std::size_t>(i)]);
      cliques.push_back(names);
    }
    write_json_file({{"metric", o.metric},
                     {"alpha", a.alpha},
                     {"n_blocks", a.n_blocks},
                     {"treatments", a.treatments},
                     {"average_ranks", a.average_ranks},
                     {"friedman",
                      {{"statistic", a.friedman.statistic}, {"df", a.friedman.df}, {"p_value", a.friedman.p_value}}},
                     {"pairs", pairs},
                     {"cliques", cliques},
                     {"dropped_blocks", dropped}},
                    o.out_json);
  }
  return kExitOk;
}

// --- hpo ---------------------------------------------------------------------

struct HpoOptions {
  Source source;
  std::string family = "dt";
  std::string weighting = "none";
  double beta = kDefaultEffectiveBeta;
  int trials = 25;
  int folds = 5;
  std::uint64_t seed = 0;
  std::size_t threshold = 1;
  std::string out;
};

int run_hpo(const HpoOptions& o) {
  const ModelFamily family = parse_family(o.family);
  HpoSpec spec;
  spec.n_trials = o.trials;
  spec.cv_folds = o.folds;
  spec.weighting = parse_weighting(o.weighting);
  spec.beta = o.beta;
  spec.validate();
  const Dataset data = filter_min_class_count(o.source.load(), o.threshold);
  const HpoResult r = hpo_random_search(family, spec, data, o.seed);

  std::size_t complete = 0, pruned = 0, failed = 0;
  for (const auto& t : r.trials) {
    if (t.status == Trial::Status::Complete) ++complete;
    else if (t.status == Trial::Status::Pruned) ++pruned;
    else ++failed;
  }
  std::cout << r.trials.size() << " trials (" << complete << " complete, " << pruned << " pruned, " << failed
            << " failed)\n";
  std::cout << "best trial " << r.best_trial << " weighted_f1 " << std::fixed << std::setprecision(4)
            << r.best_score << '\n';
  std::cout << hyperparams_to_json(r.best).dump(2) << '\n';
  if (!o.out.empty()) write_json_file(hpo_json(r), o.out);
  return kExitOk;
}

log::Level parse_level(const std::string& s) {
  if (s == "debug") return log::Level::Debug;
  if (s == "info") return log::Level::Info;
  if (s == "warn") return log::Level::Warn;
  if (s == "error") return log::Level::Error;
  if (s == "off") return log::Level::Off;
  throw InvalidArgument("unknown log level '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Class-imbalance benchmarking toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "imbench 0.1.0");
  std::string level = "warn";
  app.add_option("--log-level", level, "debug, info, warn, error or off")->capture_default_str();

  InspectOptions inspect;
  auto* c_inspect = app.add_subcommand("inspect", "Class distribution and imbalance metrics of label columns");
  c_inspect->add_option("--csv", inspect.csv, "Input CSV file")->required()->check(CLI::ExistingFile);
  c_inspect->add_option("--label", inspect.labels, "Label column (repeatable)")->capture_default_str();
  c_inspect->add_flag("--json", inspect.as_json, "Print JSON instead of text");

  WeightsOptions weights;
  auto* c_weights = app.add_subcommand("weights", "Class weights under every weighting scheme");
  weights.source.add_options(*c_weights);
  c_weights->add_option("--beta", weights.beta, "Effective-number beta in [0, 1)")->capture_default_str();
  c_weights->add_flag("--json", weights.as_json, "Print JSON instead of text");

  SynthOptions synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a Gaussian-cluster dataset as CSV");
  c_synth->add_option("--out", synth.out, "Output CSV path")->required();
  c_synth->add_option("-n,--samples", synth.cfg.n_samples, "Number of samples")->capture_default_str();
  c_synth->add_option("-k,--classes", synth.cfg.n_classes, "Number of classes")->capture_default_str();
  c_synth->add_option("-d,--features", synth.cfg.n_features, "Number of features")->capture_default_str();
  c_synth->add_option("--counts", synth.cfg.class_counts, "Explicit per-class counts")->delimiter(',');
  c_synth->add_option("--gamma", synth.gamma, "Power-law exponent of the class counts");
  c_synth->add_option("--ir", synth.ir, "Target imbalance ratio (sets the exponent)");
  c_synth->add_option("--separation", synth.cfg.cluster_separation, "Distance of cluster centres from the origin")
      ->capture_default_str();
  c_synth->add_option("--seed", synth.cfg.seed, "Random seed")->capture_default_str();
  c_synth->add_option("--label-name", synth.label_name, "Name of the label column")->capture_default_str();

  TrainOptions train;
  auto* c_train = app.add_subcommand("train", "Fit one classifier on a 60/20/20 split and report test metrics");
  train.source.add_options(*c_train);
  c_train->add_option("--family", train.family, "dt, rf, gbt or tabresnet")->capture_default_str();
  c_train->add_option("--weighting", train.weighting, "none, inverse, effective or median")->capture_default_str();
  c_train->add_option("--params", train.params_inline, "Hyperparameters as an inline JSON object");
  c_train->add_option("--params-file", train.params_file, "Hyperparameters JSON file")->check(CLI::ExistingFile);
  c_train->add_option("--beta", train.beta, "Effective-number beta")->capture_default_str();
  c_train->add_option("--seed", train.seed, "Split and model seed")->capture_default_str();
  c_train->add_option("--min-class-count", train.threshold, "Drop classes with fewer samples")
      ->capture_default_str();
  c_train->add_option("--out-model", train.out_model, "Write the fitted model as JSON");
  c_train->add_flag("--json", train.as_json, "Print JSON instead of text");

  BenchOptions bench;
  auto* c_bench = app.add_subcommand("bench", "Run a sweep described by a JSON config");
  c_bench->add_option("config", bench.config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
  c_bench->add_option("-o,--out-dir", bench.out_dir, "Output directory")->capture_default_str();
  c_bench->add_option("--workers", bench.workers, "Override the worker count");
  c_bench->add_option("--runs", bench.runs, "Override n_runs");
  c_bench->add_flag("--sequential", bench.sequential, "Run blocks one at a time for clean timings");

  StatsOptions stats;
  auto* c_stats = app.add_subcommand("stats", "Friedman, pairwise Wilcoxon/Holm and CD diagram over results");
  c_stats->add_option("results", stats.results, "Results CSV written by bench")->required()->check(
      CLI::ExistingFile);
  c_stats->add_option("--metric", stats.metric, "accuracy, macro_f1, weighted_f1 or train_seconds")
      ->capture_default_str();
  c_stats->add_option("--direction", stats.direction, "maximize or minimize (default follows the metric)");
  c_stats->add_option("--method", stats.method, "Wilcoxon p-values: auto, exact or normal")->capture_default_str();
  c_stats->add_option("--alpha", stats.alpha, "Significance level")->capture_default_str();
  c_stats->add_option("--out-svg", stats.out_svg, "Write the CD diagram as SVG");
  c_stats->add_option("--out-text", stats.out_text, "Write the CD diagram as text");
  c_stats->add_option("--out-json", stats.out_json, "Write the full analysis as JSON");

  HpoOptions hpo;
  auto* c_hpo = app.add_subcommand("hpo", "Random search with cross-validation and median pruning");
  hpo.source.add_options(*c_hpo);
  c_hpo->add_option("--family", hpo.family, "dt, rf, gbt or tabresnet")->capture_default_str();
  c_hpo->add_option("--weighting", hpo.weighting, "Weighting used inside every fold")->capture_default_str();
  c_hpo->add_option("--beta", hpo.beta, "Effective-number beta")->capture_default_str();
  c_hpo->add_option("--trials", hpo.trials, "Number of trials")->capture_default_str();
  c_hpo->add_option("--folds", hpo.folds, "Cross-validation folds")->capture_default_str();
  c_hpo->add_option("--seed", hpo.seed, "Search seed")->capture_default_str();
  c_hpo->add_option("--min-class-count", hpo.threshold, "Drop classes with fewer samples")->capture_default_str();
  c_hpo->add_option("--out", hpo.out, "Write the trial log as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    log::set_level(parse_level(level));
    if (c_inspect->parsed()) return run_inspect(inspect);
    if (c_weights->parsed()) return run_weights(weights);
    if (c_synth->parsed()) return run_synth(synth);
    if (c_train->parsed()) return run_train(train);
    if (c_bench->parsed()) return run_bench(bench);
    if (c_stats->parsed()) return run_stats(stats);
    if (c_hpo->parsed()) return run_hpo(hpo);
  } catch (const InvalidArgument& e) {
    std::cerr << "imbench: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "imbench: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
