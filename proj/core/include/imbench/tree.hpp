#pragma once

#include <cstdint>
#include <vector>

#include "imbench/classifier.hpp"
#include "imbench/dataset.hpp"
#include "imbench/weighting.hpp"

namespace imbench {

enum class SplitCriterion { Gini, Entropy };

struct TreeParams {
  int max_depth = 32;
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  SplitCriterion criterion = SplitCriterion::Gini;

  void validate() const;
};

/// Internal nodes send x[feature] <= threshold left. Every node carries a
/// value: class proportions for classification trees, a single margin for
/// boosting trees.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<double> value;

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& leaf_for(const double* row) const;
  int depth() const;
  std::size_t n_leaves() const;

  nlohmann::json to_json() const;
  static Tree from_json(const nlohmann::json& j);
};

class DecisionTree final : public Classifier {
 public:
  DecisionTree(Tree tree, int n_classes, int n_features, TreeParams params);

  ModelFamily family() const override { return ModelFamily::DecisionTree; }
  int n_classes() const override { return n_classes_; }
  int n_features() const override { return n_features_; }
  Matrix predict_proba(const Matrix& features) const override;
  nlohmann::json to_json() const override;

  const Tree& tree() const { return tree_; }
  const TreeParams& params() const { return params_; }

 private:
  Tree tree_;
  int n_classes_;
  int n_features_;
  TreeParams params_;
};

/// Greedy exact CART on class-weighted sample mass (sample i weighs w[y_i]).
/// The seed is accepted for interface symmetry; the fit is deterministic.
DecisionTree dt_fit(const Dataset& train, const TreeParams& params, const ClassWeights& w,
                    std::uint64_t seed = 0);

}  // namespace imbench
