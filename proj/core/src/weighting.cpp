#include "imbench/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace imbench {

std::string_view to_string(WeightingStrategy strategy) {
  switch (strategy) {
    case WeightingStrategy::None: return "none";
    case WeightingStrategy::Inverse: return "inverse";
    case WeightingStrategy::Effective: return "effective";
    case WeightingStrategy::Median: return "median";
  }
  return "none";
}

WeightingStrategy parse_weighting(std::string_view name) {
  for (auto s : kAllWeightings) {
    if (to_string(s) == name) return s;
  }
  throw InvalidArgument("unknown weighting strategy '" + std::string(name) +
                        "' (expected none, inverse, effective or median)");
}

namespace {

void require_positive_counts(const LabelDistribution& dist, std::string_view scheme) {
  for (std::size_t k = 0; k < dist.counts().size(); ++k) {
    if (dist.counts()[k] == 0) {
      throw InvalidArgument(std::string(scheme) + " weights undefined: class " +
                            std::to_string(k) + " has zero samples");
    }
  }
}

}  // namespace

ClassWeights weights_none(int n_classes) {
  return {std::vector<double>(static_cast<std::size_t>(n_classes), 1.0), WeightingStrategy::None, 0.0};
}

ClassWeights weights_inverse(const LabelDistribution& dist) {
  require_positive_counts(dist, "inverse");
  const double n = static_cast<double>(dist.total());
  const double k = static_cast<double>(dist.n_classes());
  ClassWeights w{{}, WeightingStrategy::Inverse, 0.0};
  for (std::size_t c : dist.counts()) w.weights.push_back(n / (k * static_cast<double>(c)));
  return w;
}

double effective_number(std::size_t n, double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw InvalidArgument("effective-number beta must lie in [0, 1); use inverse weights for beta = 1");
  }
  if (beta == 0.0) return 1.0;
  // (1 - beta^n) / (1 - beta) without cancellation for beta near 1
  return -std::expm1(static_cast<double>(n) * std::log1p(beta - 1.0)) / (1.0 - beta);
}

ClassWeights weights_effective(const LabelDistribution& dist, double beta) {
  require_positive_counts(dist, "effective-number");
  std::vector<double> eff;
  double sum = 0.0;
  for (std::size_t c : dist.counts()) {
    eff.push_back(effective_number(c, beta));
    sum += eff.back();
  }
  const double scale = sum / static_cast<double>(dist.n_classes());
  ClassWeights w{{}, WeightingStrategy::Effective, beta};
  for (double e : eff) w.weights.push_back(scale / e);
  return w;
}

ClassWeights weights_median(const LabelDistribution& dist) {
  require_positive_counts(dist, "median-frequency");
  const auto f = dist.frequencies();
  std::vector<double> sorted = f;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t k = sorted.size();
  const double median = k % 2 == 1 ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
  ClassWeights w{{}, WeightingStrategy::Median, 0.0};
  for (double fk : f) w.weights.push_back(median / fk);
  return w;
}

ClassWeights compute_weights(WeightingStrategy strategy, const LabelDistribution& dist, double beta) {
  switch (strategy) {
    case WeightingStrategy::None: return weights_none(dist.n_classes());
    case WeightingStrategy::Inverse: return weights_inverse(dist);
    case WeightingStrategy::Effective: return weights_effective(dist, beta);
    case WeightingStrategy::Median: return weights_median(dist);
  }
  throw InvalidArgument("unknown weighting strategy");
}

}  // namespace imbench
