#pragma once

#include <span>

#include "imbench/types.hpp"
#include "imbench/weighting.hpp"

namespace imbench {

/// Probabilities are clamped into [eps, 1 - eps] before taking logs.
inline constexpr double kProbEpsilon = 1e-12;

/// Row-wise softmax with the row maximum subtracted first.
Matrix softmax(const Matrix& logits);

/// Elementwise logistic function, stable for large |z|.
Vector sigmoid(const Vector& logits);

struct BinaryLoss {
  double loss = 0.0;
  Vector grad;  // d loss / d z_i for the pre-sigmoid logit z_i
};

struct CategoricalLoss {
  double loss = 0.0;
  Matrix grad;  // d loss / d z_ik for the pre-softmax logits
};

/// -(1/N) sum_i w_{y_i} [y_i log p_i + (1 - y_i) log(1 - p_i)], labels in {0, 1}.
BinaryLoss weighted_bce(std::span<const int> y, const Vector& p, const ClassWeights& w);

/// -(1/N) sum_i w_{y_i} log p_{i, y_i}.
CategoricalLoss weighted_cce(std::span<const int> y, const Matrix& p, const ClassWeights& w);

/// Same loss with one-hot targets (each row must hold a single 1).
CategoricalLoss weighted_cce(const Matrix& y_onehot, const Matrix& p, const ClassWeights& w);

Matrix one_hot(std::span<const int> y, int n_classes);

}  // namespace imbench
