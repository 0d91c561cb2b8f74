#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "imbench/eval.hpp"
#include "imbench/hpo.hpp"
#include "imbench/model.hpp"
#include "imbench/results.hpp"

namespace imbench {

/// A model family paired with a weighting strategy, named "family-weighting".
struct ClassifierId {
  ModelFamily family = ModelFamily::DecisionTree;
  WeightingStrategy weighting = WeightingStrategy::None;

  std::string name() const;
  static ClassifierId parse(std::string_view name);
  auto operator<=>(const ClassifierId&) const = default;
};

/// Where a target's data comes from: a CSV file with its column schema (or
/// just a label column name, the rest inferred), or the synthetic generator.
struct TargetSpec {
  std::string name;
  std::filesystem::path csv;
  std::filesystem::path schema;
  std::string label;
  std::optional<SynthConfig> synth;
};

struct ClassifierOverride {
  std::optional<double> beta;
  nlohmann::json hyperparams;  // null or an object applied over the family defaults
};

struct HpoSettings {
  bool enabled = false;
  int n_trials = 25;
  int cv_folds = 5;
  bool retune_per_threshold = false;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  std::vector<TargetSpec> targets;
  std::vector<std::size_t> filter_thresholds;  // empty => default ladder per target
  std::vector<WeightingStrategy> weightings{std::begin(kAllWeightings), std::end(kAllWeightings)};
  std::vector<ModelFamily> families{std::begin(kAllFamilies), std::end(kAllFamilies)};
  int n_runs = 10;
  std::uint64_t base_seed = 0;
  SplitFractions split;
  double beta = kDefaultEffectiveBeta;
  int workers = 1;
  bool sequential_timing = false;
  std::map<ModelFamily, HyperParams> hyperparams;  // per-family defaults
  std::map<std::string, ClassifierOverride> classifier_overrides;
  HpoSettings hpo;

  void validate() const;
  std::vector<ClassifierId> classifiers() const;
  HyperParams params_for(const ClassifierId& id) const;
  double beta_for(const ClassifierId& id) const;

  /// JSON document; relative paths resolve against `base_dir`.
  static ExperimentConfig parse(std::string_view json_text, const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& path);
};

/// Reads and preprocesses a target's dataset.
Dataset load_target(const TargetSpec& target);

/// 1, 2, 5, 10, 20, 50, ... up to the largest threshold that keeps at least
/// two classes.
std::vector<std::size_t> default_threshold_ladder(const Dataset& data);

struct BlockSpec {
  std::string target;
  std::size_t filter_threshold = 1;
  ClassifierId classifier;
  std::uint64_t seed = 0;
  HyperParams params = TreeParams{};
  SplitFractions split;
  double beta = kDefaultEffectiveBeta;
};

/// BlockResult plus the per-class test report behind it.
struct BlockOutcome {
  BlockResult result;
  F1Report test_report;
  ClassWeights weights;
};

/// filter -> stratified split -> class weights on the training labels -> fit
/// (timed) -> test metrics. Degenerate data is reported as a skipped row and
/// fit failures as failed rows; neither throws.
BlockOutcome run_block_detailed(const Dataset& data, const BlockSpec& spec);
BlockResult run_block(const Dataset& data, const BlockSpec& spec);

struct SweepOutput {
  std::vector<BlockResult> rows;  // sorted by block key
  std::vector<SummaryRow> summary;
  std::map<std::string, HpoResult> hpo;  // keyed "classifier/target[@threshold]"
};

/// Every threshold x classifier x run of every target. Blocks run on
/// `workers` threads; row order does not depend on scheduling.
SweepOutput run_sweep(const ExperimentConfig& cfg);

}  // namespace imbench
