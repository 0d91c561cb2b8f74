#include "imbench/imbalance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "imbench/rank_stats.hpp"

namespace imbench {

LabelDistribution LabelDistribution::from_counts(std::vector<std::size_t> counts) {
  LabelDistribution dist;
  dist.total_ = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (dist.total_ == 0) throw InvalidArgument("label distribution needs at least one sample");
  dist.counts_ = std::move(counts);
  return dist;
}

LabelDistribution LabelDistribution::of(std::span<const int> labels, int n_classes) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes), 0);
  for (int y : labels) {
    if (y < 0 || y >= n_classes) throw InvalidArgument("label out of range: " + std::to_string(y));
    ++counts[static_cast<std::size_t>(y)];
  }
  return from_counts(std::move(counts));
}

double LabelDistribution::frequency(int k) const {
  return static_cast<double>(counts_.at(static_cast<std::size_t>(k))) / static_cast<double>(total_);
}

std::vector<double> LabelDistribution::frequencies() const {
  std::vector<double> f(counts_.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] = static_cast<double>(counts_[k]) / static_cast<double>(total_);
  }
  return f;
}

LabelDistribution class_frequencies(std::span<const int> labels) {
  if (labels.empty()) throw InvalidArgument("class_frequencies needs a nonempty label vector");
  const int max_label = *std::max_element(labels.begin(), labels.end());
  if (*std::min_element(labels.begin(), labels.end()) < 0) {
    throw InvalidArgument("labels must be non-negative");
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(max_label) + 1, 0);
  for (int y : labels) ++counts[static_cast<std::size_t>(y)];
  std::erase(counts, std::size_t{0});
  return LabelDistribution::from_counts(std::move(counts));
}

namespace {

void require_two_classes(const LabelDistribution& dist) {
  if (dist.n_classes() < 2) throw InvalidArgument("imbalance metrics need K >= 2 classes");
}

}  // namespace

double cvcf(const LabelDistribution& dist) {
  require_two_classes(dist);
  const auto f = dist.frequencies();
  const double k = static_cast<double>(f.size());
  const double mean = std::accumulate(f.begin(), f.end(), 0.0) / k;
  double ss = 0.0;
  for (double fk : f) ss += (fk - mean) * (fk - mean);
  return std::sqrt(ss / k) / mean;
}

double imbalance_ratio(const LabelDistribution& dist) {
  require_two_classes(dist);
  const auto [lo, hi] = std::minmax_element(dist.counts().begin(), dist.counts().end());
  if (*lo == 0) throw InvalidArgument("imbalance ratio undefined: a class has zero samples");
  return static_cast<double>(*hi) / static_cast<double>(*lo);
}

double necd(const LabelDistribution& dist) {
  require_two_classes(dist);
  double h = 0.0;
  for (double fk : dist.frequencies()) {
    if (fk > 0.0) h -= fk * std::log(fk);
  }
  return h / std::log(static_cast<double>(dist.n_classes()));
}

ImbalanceReport imbalance_report(const LabelDistribution& dist) {
  return {cvcf(dist), imbalance_ratio(dist), necd(dist)};
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw InvalidArgument("spearman needs two equal-length samples of size >= 2");
  }
  const auto ra = midranks(a);
  const auto rb = midranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace imbench
