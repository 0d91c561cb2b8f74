#include "imbench/tree.hpp"

#include <algorithm>
#include <string>

#include "tree_builder.hpp"

namespace imbench {

void TreeParams::validate() const {
  if (max_depth < 1 || max_depth > 32) throw InvalidArgument("max_depth must lie in [1, 32]");
  if (min_samples_split < 2) throw InvalidArgument("min_samples_split must be at least 2");
  if (min_samples_leaf < 1) throw InvalidArgument("min_samples_leaf must be at least 1");
}

const TreeNode& Tree::leaf_for(const double* row) const {
  const TreeNode* node = &nodes.front();
  while (!node->is_leaf()) {
    const int next = row[node->feature] <= node->threshold ? node->left : node->right;
    node = &nodes[static_cast<std::size_t>(next)];
  }
  return *node;
}

int Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> level(nodes.size(), 0);
  int deepest = 0;
  // children are always appended after their parent
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes[i].is_leaf()) {
      level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t Tree::n_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

nlohmann::json Tree::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& n : nodes) {
    if (n.is_leaf()) {
      arr.push_back({{"value", n.value}});
    } else {
      arr.push_back({{"feature", n.feature},
                     {"threshold", n.threshold},
                     {"left", n.left},
                     {"right", n.right},
                     {"value", n.value}});
    }
  }
  return {{"nodes", std::move(arr)}};
}

Tree Tree::from_json(const nlohmann::json& j) {
  Tree t;
  for (const auto& n : j.at("nodes")) {
    TreeNode node;
    node.value = n.at("value").get<std::vector<double>>();
    if (n.contains("feature")) {
      node.feature = n.at("feature").get<int>();
      node.threshold = n.at("threshold").get<double>();
      node.left = n.at("left").get<int>();
      node.right = n.at("right").get<int>();
    }
    t.nodes.push_back(std::move(node));
  }
  if (t.nodes.empty()) throw InvalidArgument("tree JSON has no nodes");
  for (const auto& n : t.nodes) {
    if (!n.is_leaf() && (n.left <= 0 || n.right <= 0 ||
                         static_cast<std::size_t>(std::max(n.left, n.right)) >= t.nodes.size())) {
      throw InvalidArgument("tree JSON has a dangling child index");
    }
  }
  return t;
}

DecisionTree::DecisionTree(Tree tree, int n_classes, int n_features, TreeParams params)
    : tree_(std::move(tree)), n_classes_(n_classes), n_features_(n_features), params_(params) {}

Matrix DecisionTree::predict_proba(const Matrix& features) const {
  check_width(features);
  Matrix p(features.rows(), n_classes_);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const auto& v = tree_.leaf_for(features.row(i).data()).value;
    for (int k = 0; k < n_classes_; ++k) p(i, k) = v[static_cast<std::size_t>(k)];
  }
  return p;
}

nlohmann::json DecisionTree::to_json() const {
  return {{"family", "dt"},
          {"n_classes", n_classes_},
          {"n_features", n_features_},
          {"params",
           {{"max_depth", params_.max_depth},
            {"min_samples_split", params_.min_samples_split},
            {"min_samples_leaf", params_.min_samples_leaf},
            {"criterion", params_.criterion == SplitCriterion::Gini ? "gini" : "entropy"}}},
          {"tree", tree_.to_json()}};
}

DecisionTree dt_fit(const Dataset& train, const TreeParams& params, const ClassWeights& w,
                    std::uint64_t /*seed*/) {
  params.validate();
  if (train.rows() == 0) throw InvalidArgument("dt_fit: empty training set");
  if (w.n_classes() != train.n_classes()) {
    throw InvalidArgument("dt_fit: " + std::to_string(w.n_classes()) + " class weights for " +
                          std::to_string(train.n_classes()) + " classes");
  }
  detail::ClassMassPolicy policy(train.labels, train.n_classes(), w.weights, nullptr,
                                 params.criterion);
  detail::GrowLimits limits{params.max_depth, params.min_samples_split, params.min_samples_leaf, 0};
  detail::TreeGrower grower(train.features, detail::presort(train.features), policy, limits, nullptr);
  return DecisionTree(grower.grow(), train.n_classes(), static_cast<int>(train.n_features()), params);
}

}  // namespace imbench
