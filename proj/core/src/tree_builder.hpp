#pragma once

// Exact greedy tree growing over presorted feature orders. Each feature keeps
// an array of active sample ids; a node owns the same contiguous range
// [begin, end) in every array, sorted by that feature. Splitting stably
// partitions the range in every array, so no re-sorting happens below the
// root.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "imbench/tree.hpp"

namespace imbench::detail {

using SampleId = std::uint32_t;
using FeatureOrders = std::vector<std::vector<SampleId>>;

/// Global ascending order of every feature column (stable on ties).
FeatureOrders presort(const Matrix& x);

/// Copies of `orders` restricted to samples with keep[i] != 0.
FeatureOrders filter_orders(const FeatureOrders& orders, const std::vector<char>& keep);

/// Midpoint of a < b that still separates them after rounding.
inline double split_threshold(double a, double b) {
  const double mid = a + (b - a) / 2.0;
  return mid >= b ? a : mid;
}

struct GrowLimits {
  int max_depth = 32;
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  // Features examined per node; 0 means all, scanned in index order.
  int max_features = 0;
};

// Policy requirements (see ClassMassPolicy and NewtonPolicy in the .cpp files):
//   using Stats;
//   Stats stats(const SampleId* ids, size_t n) const;
//   size_t count(const Stats&) const;          multiplicity-weighted sample count
//   bool splittable(const Stats&) const;
//   void begin_scan(const Stats& parent);
//   void add_left(SampleId i);
//   bool children_ok() const;                  beyond the min_samples_leaf check
//   size_t left_count() const;
//   double gain() const;
//   bool accept(double gain) const;
//   std::vector<double> value(const Stats&, const std::vector<double>* parent) const;
template <class Policy>
class TreeGrower {
 public:
  // `features` restricts the candidate columns (ascending); empty means all.
  TreeGrower(const Matrix& x, FeatureOrders orders, Policy& policy, GrowLimits limits,
             std::mt19937_64* rng, std::vector<int> features = {})
      : x_(x),
        orders_(std::move(orders)),
        policy_(policy),
        limits_(limits),
        rng_(rng),
        feature_pool_(std::move(features)) {
    goes_left_.assign(static_cast<std::size_t>(x.rows()), 0);
    if (feature_pool_.empty()) {
      feature_pool_.resize(static_cast<std::size_t>(x.cols()));
      for (std::size_t f = 0; f < feature_pool_.size(); ++f) feature_pool_[f] = static_cast<int>(f);
    }
  }

  Tree grow() {
    Tree tree;
    const std::size_t n = orders_.empty() ? 0 : orders_[0].size();
    grow_node(tree, 0, n, 0, nullptr);
    return tree;
  }

 private:
  struct Candidate {
    int feature = -1;
    double threshold = 0.0;
    double gain = -std::numeric_limits<double>::infinity();
  };

  int grow_node(Tree& tree, std::size_t begin, std::size_t end, int depth,
                const std::vector<double>* parent_value) {
    const auto stats = policy_.stats(orders_[0].data() + begin, end - begin);
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, policy_.value(stats, parent_value)});

    if (depth >= limits_.max_depth) return id;
    if (policy_.count(stats) < limits_.min_samples_split) return id;
    if (!policy_.splittable(stats)) return id;

    const std::optional<Candidate> best = find_split(stats, begin, end);
    if (!best) return id;

    const std::size_t mid = partition(*best, begin, end);
    if (mid == begin || mid == end) return id;  // cannot happen for a valid candidate

    tree.nodes[static_cast<std::size_t>(id)].feature = best->feature;
    tree.nodes[static_cast<std::size_t>(id)].threshold = best->threshold;
    // copy: the vector may reallocate while children are appended
    const std::vector<double> value = tree.nodes[static_cast<std::size_t>(id)].value;
    const int left = grow_node(tree, begin, mid, depth + 1, &value);
    const int right = grow_node(tree, mid, end, depth + 1, &value);
    tree.nodes[static_cast<std::size_t>(id)].left = left;
    tree.nodes[static_cast<std::size_t>(id)].right = right;
    return id;
  }

  void scan_feature(int f, const typename Policy::Stats& parent, std::size_t begin,
                    std::size_t end, std::optional<Candidate>& best) {
    const auto& order = orders_[static_cast<std::size_t>(f)];
    policy_.begin_scan(parent);
    const std::size_t total = policy_.count(parent);
    for (std::size_t pos = begin; pos + 1 < end; ++pos) {
      const SampleId i = order[pos];
      policy_.add_left(i);
      const double a = x_(i, f);
      const double b = x_(order[pos + 1], f);
      if (!(a < b)) continue;
      const std::size_t nl = policy_.left_count();
      if (nl < limits_.min_samples_leaf || total - nl < limits_.min_samples_leaf) continue;
      if (!policy_.children_ok()) continue;
      const double g = policy_.gain();
      if (!policy_.accept(g)) continue;
      if (!best || g > best->gain) best = Candidate{f, split_threshold(a, b), g};
    }
  }

  std::optional<Candidate> find_split(const typename Policy::Stats& parent, std::size_t begin,
                                      std::size_t end) {
    std::optional<Candidate> best;
    const int d = static_cast<int>(feature_pool_.size());
    if (limits_.max_features <= 0 || limits_.max_features >= d || rng_ == nullptr) {
      for (int f : feature_pool_) scan_feature(f, parent, begin, end, best);
      return best;
    }
    // Random subset of max_features; keep drawing past it only while no valid
    // split has been found.
    std::shuffle(feature_pool_.begin(), feature_pool_.end(), *rng_);
    const auto m = static_cast<std::size_t>(limits_.max_features);
    std::vector<int> chosen(feature_pool_.begin(), feature_pool_.begin() + static_cast<std::ptrdiff_t>(m));
    std::sort(chosen.begin(), chosen.end());
    for (int f : chosen) scan_feature(f, parent, begin, end, best);
    for (std::size_t k = m; !best && k < feature_pool_.size(); ++k) {
      scan_feature(feature_pool_[k], parent, begin, end, best);
    }
    return best;
  }

  std::size_t partition(const Candidate& c, std::size_t begin, std::size_t end) {
    const auto& split_order = orders_[static_cast<std::size_t>(c.feature)];
    std::size_t n_left = 0;
    for (std::size_t pos = begin; pos < end; ++pos) {
      const SampleId i = split_order[pos];
      const bool left = x_(i, c.feature) <= c.threshold;
      goes_left_[i] = left ? 1 : 0;
      n_left += left ? 1 : 0;
    }
    for (auto& order : orders_) {
      buffer_.clear();
      std::size_t out = begin;
      for (std::size_t pos = begin; pos < end; ++pos) {
        const SampleId i = order[pos];
        if (goes_left_[i]) {
          order[out++] = i;
        } else {
          buffer_.push_back(i);
        }
      }
      std::copy(buffer_.begin(), buffer_.end(), order.begin() + static_cast<std::ptrdiff_t>(out));
    }
    return begin + n_left;
  }

  const Matrix& x_;
  FeatureOrders orders_;
  Policy& policy_;
  GrowLimits limits_;
  std::mt19937_64* rng_;
  std::vector<char> goes_left_;
  std::vector<SampleId> buffer_;
  std::vector<int> feature_pool_;
};

/// Weighted class-mass impurity policy shared by the decision tree and the
/// forest. Sample i counts `multiplicity[i]` times with mass
/// multiplicity[i] * class_weight[y_i].
class ClassMassPolicy {
 public:
  struct Stats {
    std::vector<double> mass;
    double total = 0.0;
    std::size_t count = 0;
    int distinct_labels = 0;
  };

  ClassMassPolicy(const Labels& y, int n_classes, const std::vector<double>& class_weight,
                  const std::vector<std::uint32_t>* multiplicity, SplitCriterion criterion);

  Stats stats(const SampleId* ids, std::size_t n) const;
  std::size_t count(const Stats& s) const { return s.count; }
  bool splittable(const Stats& s) const { return s.distinct_labels > 1; }
  void begin_scan(const Stats& parent);
  void add_left(SampleId i);
  bool children_ok() const { return true; }
  std::size_t left_count() const { return left_count_; }
  double gain() const;
  bool accept(double) const { return true; }
  std::vector<double> value(const Stats& s, const std::vector<double>* parent) const;

 private:
  double impurity(const double* mass, double total) const;
  std::uint32_t mult(SampleId i) const { return multiplicity_ ? (*multiplicity_)[i] : 1u; }

  const Labels& y_;
  int k_;
  std::vector<double> class_weight_;
  const std::vector<std::uint32_t>* multiplicity_;
  SplitCriterion criterion_;

  const Stats* parent_ = nullptr;
  double parent_impurity_ = 0.0;
  std::vector<double> left_mass_;
  mutable std::vector<double> right_mass_;  // scratch for gain()
  double left_total_ = 0.0;
  std::size_t left_count_ = 0;
};

}  // namespace imbench::detail
