#include "imbench/eval.hpp"

#include <algorithm>
#include <string>

namespace imbench {

ConfusionMatrix::ConfusionMatrix(int n_classes) : k_(n_classes) {
  if (n_classes < 1) throw InvalidArgument("confusion matrix needs at least one class");
  cells_.assign(static_cast<std::size_t>(k_) * static_cast<std::size_t>(k_), 0);
}

void ConfusionMatrix::add(int truth, int predicted, std::size_t count) {
  if (truth < 0 || truth >= k_ || predicted < 0 || predicted >= k_) {
    throw InvalidArgument("label pair (" + std::to_string(truth) + ", " + std::to_string(predicted) +
                          ") outside 0.." + std::to_string(k_ - 1));
  }
  cells_[static_cast<std::size_t>(truth * k_ + predicted)] += count;
  total_ += count;
}

std::size_t ConfusionMatrix::at(int truth, int predicted) const {
  return cells_.at(static_cast<std::size_t>(truth * k_ + predicted));
}

std::size_t ConfusionMatrix::support(int k) const {
  std::size_t s = 0;
  for (int j = 0; j < k_; ++j) s += at(k, j);
  return s;
}

std::size_t ConfusionMatrix::false_positives(int k) const {
  std::size_t col = 0;
  for (int t = 0; t < k_; ++t) col += at(t, k);
  return col - at(k, k);
}

std::size_t ConfusionMatrix::false_negatives(int k) const { return support(k) - at(k, k); }

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred, int n_classes) {
  if (y_true.size() != y_pred.size()) {
    throw InvalidArgument("confusion: " + std::to_string(y_true.size()) + " true labels but " +
                          std::to_string(y_pred.size()) + " predictions");
  }
  if (n_classes <= 0) {
    int top = 0;
    for (int y : y_true) top = std::max(top, y);
    for (int y : y_pred) top = std::max(top, y);
    n_classes = top + 1;
  }
  ConfusionMatrix cm(n_classes);
  for (std::size_t i = 0; i < y_true.size(); ++i) cm.add(y_true[i], y_pred[i]);
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw InvalidArgument("accuracy of an empty confusion matrix");
  std::size_t trace = 0;
  for (int k = 0; k < cm.n_classes(); ++k) trace += cm.at(k, k);
  return static_cast<double>(trace) / static_cast<double>(cm.total());
}

namespace {

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

F1Report f1_scores(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw InvalidArgument("f1 of an empty confusion matrix");
  const auto k = static_cast<std::size_t>(cm.n_classes());
  F1Report r;
  r.precision.resize(k);
  r.recall.resize(k);
  r.f1.resize(k);
  r.support.resize(k);
  const double n = static_cast<double>(cm.total());
  for (int c = 0; c < cm.n_classes(); ++c) {
    const auto i = static_cast<std::size_t>(c);
    const double tp = static_cast<double>(cm.true_positives(c));
    const double fp = static_cast<double>(cm.false_positives(c));
    const double fn = static_cast<double>(cm.false_negatives(c));
    r.precision[i] = ratio_or_zero(tp, tp + fp);
    r.recall[i] = ratio_or_zero(tp, tp + fn);
    r.f1[i] = ratio_or_zero(2.0 * r.precision[i] * r.recall[i], r.precision[i] + r.recall[i]);
    r.support[i] = cm.support(c);
    r.macro_f1 += r.f1[i];
    r.weighted_f1 += static_cast<double>(r.support[i]) / n * r.f1[i];
  }
  r.macro_f1 /= static_cast<double>(k);
  return r;
}

Labels argmax_rows(const Matrix& scores) {
  Labels out(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < scores.cols(); ++j) {
      if (scores(i, j) > scores(i, best)) best = j;
    }
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

}  // namespace imbench
