#include "tree_builder.hpp"

#include <cmath>
#include <numeric>

namespace imbench::detail {

FeatureOrders presort(const Matrix& x) {
  FeatureOrders orders(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index f = 0; f < x.cols(); ++f) {
    auto& order = orders[static_cast<std::size_t>(f)];
    order.resize(static_cast<std::size_t>(x.rows()));
    std::iota(order.begin(), order.end(), SampleId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](SampleId a, SampleId b) { return x(a, f) < x(b, f); });
  }
  return orders;
}

FeatureOrders filter_orders(const FeatureOrders& orders, const std::vector<char>& keep) {
  FeatureOrders out(orders.size());
  for (std::size_t f = 0; f < orders.size(); ++f) {
    out[f].reserve(orders[f].size());
    for (SampleId i : orders[f]) {
      if (keep[i]) out[f].push_back(i);
    }
  }
  return out;
}

ClassMassPolicy::ClassMassPolicy(const Labels& y, int n_classes,
                                 const std::vector<double>& class_weight,
                                 const std::vector<std::uint32_t>* multiplicity,
                                 SplitCriterion criterion)
    : y_(y),
      k_(n_classes),
      class_weight_(class_weight),
      multiplicity_(multiplicity),
      criterion_(criterion),
      left_mass_(static_cast<std::size_t>(n_classes)),
      right_mass_(static_cast<std::size_t>(n_classes)) {}

ClassMassPolicy::Stats ClassMassPolicy::stats(const SampleId* ids, std::size_t n) const {
  Stats s;
  s.mass.assign(static_cast<std::size_t>(k_), 0.0);
  std::vector<char> seen(static_cast<std::size_t>(k_), 0);
  for (std::size_t j = 0; j < n; ++j) {
    const SampleId i = ids[j];
    const auto c = static_cast<std::size_t>(y_[i]);
    const std::uint32_t m = mult(i);
    s.mass[c] += m * class_weight_[c];
    s.count += m;
    if (m > 0 && !seen[c]) {
      seen[c] = 1;
      ++s.distinct_labels;
    }
  }
  for (double v : s.mass) s.total += v;
  return s;
}

double ClassMassPolicy::impurity(const double* mass, double total) const {
  if (total <= 0.0) return 0.0;
  double acc = 0.0;
  if (criterion_ == SplitCriterion::Gini) {
    for (int c = 0; c < k_; ++c) {
      const double p = mass[c] / total;
      acc += p * p;
    }
    return 1.0 - acc;
  }
  for (int c = 0; c < k_; ++c) {
    const double p = mass[c] / total;
    if (p > 0.0) acc -= p * std::log(p);
  }
  return acc;
}

void ClassMassPolicy::begin_scan(const Stats& parent) {
  parent_ = &parent;
  parent_impurity_ = impurity(parent.mass.data(), parent.total);
  std::fill(left_mass_.begin(), left_mass_.end(), 0.0);
  left_total_ = 0.0;
  left_count_ = 0;
}

void ClassMassPolicy::add_left(SampleId i) {
  const auto c = static_cast<std::size_t>(y_[i]);
  const std::uint32_t m = mult(i);
  const double add = m * class_weight_[c];
  left_mass_[c] += add;
  left_total_ += add;
  left_count_ += m;
}

double ClassMassPolicy::gain() const {
  auto& right = right_mass_;
  double right_total = 0.0;
  for (int c = 0; c < k_; ++c) {
    const auto k = static_cast<std::size_t>(c);
    right[k] = parent_->mass[k] - left_mass_[k];
    right_total += right[k];
  }
  return parent_->total * parent_impurity_ - left_total_ * impurity(left_mass_.data(), left_total_) -
         right_total * impurity(right.data(), right_total);
}

std::vector<double> ClassMassPolicy::value(const Stats& s, const std::vector<double>* parent) const {
  if (s.total <= 0.0) {
    if (parent) return *parent;
    return std::vector<double>(static_cast<std::size_t>(k_), 1.0 / k_);
  }
  std::vector<double> p(s.mass.size());
  for (std::size_t c = 0; c < p.size(); ++c) p[c] = s.mass[c] / s.total;
  return p;
}

}  // namespace imbench::detail
