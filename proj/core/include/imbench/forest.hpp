#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "imbench/tree.hpp"

namespace imbench {

/// Features examined per split: sqrt(d), log2(d), or a fraction of d
/// (at least one feature in every case).
struct MaxFeatures {
  enum class Rule { Sqrt, Log2, Fraction } rule = Rule::Sqrt;
  double fraction = 1.0;

  int resolve(int n_features) const;
  std::string to_string() const;
  static MaxFeatures parse(const std::string& text);
};

struct ForestParams {
  int n_estimators = 100;
  int max_depth = 25;
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  SplitCriterion criterion = SplitCriterion::Gini;
  MaxFeatures max_features;
  bool bootstrap = true;

  void validate() const;
};

class RandomForest final : public Classifier {
 public:
  RandomForest(std::vector<Tree> trees, int n_classes, int n_features, ForestParams params);

  ModelFamily family() const override { return ModelFamily::RandomForest; }
  int n_classes() const override { return n_classes_; }
  int n_features() const override { return n_features_; }
  /// Mean of the trees' leaf distributions.
  Matrix predict_proba(const Matrix& features) const override;
  nlohmann::json to_json() const override;

  const std::vector<Tree>& trees() const { return trees_; }

 private:
  std::vector<Tree> trees_;
  int n_classes_;
  int n_features_;
  ForestParams params_;
};

/// Each tree sees a bootstrap resample (or all rows) and a fresh random
/// feature subset at every node. Tree t draws from a generator seeded by
/// (seed, t), so the forest is reproducible for a given seed.
RandomForest rf_fit(const Dataset& train, const ForestParams& params, const ClassWeights& w,
                    std::uint64_t seed);

/// Seed for the t-th member of an ensemble.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace imbench
