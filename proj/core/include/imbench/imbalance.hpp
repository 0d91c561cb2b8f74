#pragma once

#include <span>
#include <vector>

#include "imbench/types.hpp"

namespace imbench {

/// Per-class counts N_k and relative frequencies f_k = N_k / N.
class LabelDistribution {
 public:
  /// Counts are taken as given; zero entries are kept as classes.
  static LabelDistribution from_counts(std::vector<std::size_t> counts);

  /// Counts over a fixed label space 0..n_classes-1 (zeros kept).
  static LabelDistribution of(std::span<const int> labels, int n_classes);

  const std::vector<std::size_t>& counts() const { return counts_; }
  std::size_t total() const { return total_; }
  int n_classes() const { return static_cast<int>(counts_.size()); }
  double frequency(int k) const;
  std::vector<double> frequencies() const;

 private:
  std::vector<std::size_t> counts_;
  std::size_t total_ = 0;
};

/// Distribution of the observed labels; classes that never occur are not part
/// of K.
LabelDistribution class_frequencies(std::span<const int> labels);

/// Coefficient of variation of the class frequencies (population standard
/// deviation over K, divided by the mean frequency 1/K).
double cvcf(const LabelDistribution& dist);

/// Largest over smallest class count. Throws when a count is zero.
double imbalance_ratio(const LabelDistribution& dist);

/// Shannon entropy of the frequencies divided by log K (natural log; zero
/// frequencies contribute nothing).
double necd(const LabelDistribution& dist);

struct ImbalanceReport {
  double cvcf = 0.0;
  double ir = 1.0;
  double necd = 1.0;

  bool operator==(const ImbalanceReport&) const = default;
};

ImbalanceReport imbalance_report(const LabelDistribution& dist);

/// Spearman rank correlation with midranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

}  // namespace imbench
