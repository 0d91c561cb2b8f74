#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "imbench/imbalance.hpp"

namespace imbench {

enum class WeightingStrategy { None, Inverse, Effective, Median };

inline constexpr double kDefaultEffectiveBeta = 0.9999;

std::string_view to_string(WeightingStrategy strategy);
WeightingStrategy parse_weighting(std::string_view name);
inline constexpr WeightingStrategy kAllWeightings[] = {
    WeightingStrategy::None, WeightingStrategy::Inverse, WeightingStrategy::Effective,
    WeightingStrategy::Median};

/// Positive per-class multipliers for the loss (or sample mass in trees).
struct ClassWeights {
  std::vector<double> weights;
  WeightingStrategy strategy = WeightingStrategy::None;
  double beta = 0.0;  // only meaningful for Effective

  double operator[](int k) const { return weights[static_cast<std::size_t>(k)]; }
  int n_classes() const { return static_cast<int>(weights.size()); }
};

ClassWeights weights_none(int n_classes);

/// w_k = N / (K N_k)
ClassWeights weights_inverse(const LabelDistribution& dist);

/// N_k^eff = (1 - beta^N_k) / (1 - beta); w_k = (sum_j N_j^eff / K) / N_k^eff.
/// Requires 0 <= beta < 1.
ClassWeights weights_effective(const LabelDistribution& dist, double beta = kDefaultEffectiveBeta);

/// w_k = median(f) / f_k; for even K the median is the mean of the two middle
/// frequencies.
ClassWeights weights_median(const LabelDistribution& dist);

ClassWeights compute_weights(WeightingStrategy strategy, const LabelDistribution& dist,
                             double beta = kDefaultEffectiveBeta);

/// Effective number of samples for a class of size n.
double effective_number(std::size_t n, double beta);

}  // namespace imbench
