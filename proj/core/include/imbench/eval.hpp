#pragma once

#include <span>
#include <vector>

#include "imbench/types.hpp"

namespace imbench {

/// K x K counts; rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int n_classes);

  void add(int truth, int predicted, std::size_t count = 1);

  int n_classes() const { return k_; }
  std::size_t at(int truth, int predicted) const;
  std::size_t total() const { return total_; }
  std::size_t true_positives(int k) const { return at(k, k); }
  std::size_t false_positives(int k) const;
  std::size_t false_negatives(int k) const;
  std::size_t support(int k) const;  // row sum

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  int k_;
  std::vector<std::size_t> cells_;
  std::size_t total_ = 0;
};

/// K defaults to 1 + the largest label seen in either vector.
ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred,
                          int n_classes = 0);

double accuracy(const ConfusionMatrix& cm);

struct F1Report {
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
  std::vector<std::size_t> support;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
};

/// Zero denominators give 0 for precision, recall and F1.
F1Report f1_scores(const ConfusionMatrix& cm);

/// Index of the largest entry per row (first on ties).
Labels argmax_rows(const Matrix& scores);

}  // namespace imbench
