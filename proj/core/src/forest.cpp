#include "imbench/forest.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "csv_util.hpp"
#include "tree_builder.hpp"

namespace imbench {

int MaxFeatures::resolve(int n_features) const {
  double m = 0.0;
  switch (rule) {
    case Rule::Sqrt: m = std::floor(std::sqrt(static_cast<double>(n_features))); break;
    case Rule::Log2: m = std::floor(std::log2(static_cast<double>(n_features))); break;
    case Rule::Fraction: m = std::floor(fraction * n_features); break;
  }
  return std::clamp(static_cast<int>(m), 1, std::max(1, n_features));
}

std::string MaxFeatures::to_string() const {
  switch (rule) {
    case Rule::Sqrt: return "sqrt";
    case Rule::Log2: return "log2";
    case Rule::Fraction: break;
  }
  return detail::format_double(fraction);
}

MaxFeatures MaxFeatures::parse(const std::string& text) {
  if (text == "sqrt") return {Rule::Sqrt, 1.0};
  if (text == "log2") return {Rule::Log2, 1.0};
  double f = 0.0;
  try {
    std::size_t used = 0;
    f = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw InvalidArgument("max_features must be sqrt, log2 or a fraction in (0, 1]: '" + text + "'");
  }
  if (!(f > 0.0 && f <= 1.0)) throw InvalidArgument("max_features fraction must lie in (0, 1]");
  return {Rule::Fraction, f};
}

void ForestParams::validate() const {
  if (n_estimators < 1) throw InvalidArgument("n_estimators must be at least 1");
  TreeParams{max_depth, min_samples_split, min_samples_leaf, criterion}.validate();
  if (max_features.rule == MaxFeatures::Rule::Fraction &&
      !(max_features.fraction > 0.0 && max_features.fraction <= 1.0)) {
    throw InvalidArgument("max_features fraction must lie in (0, 1]");
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finaliser over the pair
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RandomForest::RandomForest(std::vector<Tree> trees, int n_classes, int n_features,
                           ForestParams params)
    : trees_(std::move(trees)), n_classes_(n_classes), n_features_(n_features), params_(params) {}

Matrix RandomForest::predict_proba(const Matrix& features) const {
  check_width(features);
  Matrix p = Matrix::Zero(features.rows(), n_classes_);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const double* row = features.row(i).data();
    for (const auto& tree : trees_) {
      const auto& v = tree.leaf_for(row).value;
      for (int k = 0; k < n_classes_; ++k) p(i, k) += v[static_cast<std::size_t>(k)];
    }
  }
  p /= static_cast<double>(trees_.size());
  return p;
}

nlohmann::json RandomForest::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  return {{"family", "rf"},
          {"n_classes", n_classes_},
          {"n_features", n_features_},
          {"params",
           {{"n_estimators", params_.n_estimators},
            {"max_depth", params_.max_depth},
            {"min_samples_split", params_.min_samples_split},
            {"min_samples_leaf", params_.min_samples_leaf},
            {"criterion", params_.criterion == SplitCriterion::Gini ? "gini" : "entropy"},
            {"max_features", params_.max_features.to_string()},
            {"bootstrap", params_.bootstrap}}},
          {"trees", std::move(trees)}};
}

RandomForest rf_fit(const Dataset& train, const ForestParams& params, const ClassWeights& w,
                    std::uint64_t seed) {
  params.validate();
  const std::size_t n = train.rows();
  if (n == 0) throw InvalidArgument("rf_fit: empty training set");
  if (w.n_classes() != train.n_classes()) throw InvalidArgument("rf_fit: weight/class count mismatch");

  const int d = static_cast<int>(train.n_features());
  const auto base_orders = detail::presort(train.features);
  detail::GrowLimits limits{params.max_depth, params.min_samples_split, params.min_samples_leaf,
                            params.max_features.resolve(d)};

  std::vector<Tree> trees;
  trees.reserve(static_cast<std::size_t>(params.n_estimators));
  std::vector<std::uint32_t> mult(n, 1);
  std::vector<char> keep(n, 1);
  for (int t = 0; t < params.n_estimators; ++t) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    if (params.bootstrap) {
      std::fill(mult.begin(), mult.end(), 0u);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (std::size_t draw = 0; draw < n; ++draw) ++mult[pick(rng)];
      for (std::size_t i = 0; i < n; ++i) keep[i] = mult[i] > 0 ? 1 : 0;
    }
    detail::ClassMassPolicy policy(train.labels, train.n_classes(), w.weights, &mult,
                                   params.criterion);
    auto orders = params.bootstrap ? detail::filter_orders(base_orders, keep) : base_orders;
    detail::TreeGrower grower(train.features, std::move(orders), policy, limits, &rng);
    trees.push_back(grower.grow());
  }
  return RandomForest(std::move(trees), train.n_classes(), d, params);
}

}  // namespace imbench
