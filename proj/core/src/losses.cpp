#include "imbench/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace imbench {

Matrix softmax(const Matrix& logits) {
  Matrix p(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    p.row(i) = (logits.row(i).array() - m).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

Vector sigmoid(const Vector& logits) {
  Vector p(logits.size());
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    const double z = logits[i];
    if (z >= 0) {
      p[i] = 1.0 / (1.0 + std::exp(-z));
    } else {
      const double e = std::exp(z);
      p[i] = e / (1.0 + e);
    }
  }
  return p;
}

namespace {

double clamp_prob(double p) { return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon); }

double class_weight(const ClassWeights& w, int y) {
  if (y < 0 || y >= w.n_classes()) {
    throw InvalidArgument("label " + std::to_string(y) + " outside the weight vector");
  }
  return w[y];
}

}  // namespace

BinaryLoss weighted_bce(std::span<const int> y, const Vector& p, const ClassWeights& w) {
  if (static_cast<Eigen::Index>(y.size()) != p.size()) {
    throw InvalidArgument("weighted_bce: " + std::to_string(y.size()) + " labels but " +
                          std::to_string(p.size()) + " probabilities");
  }
  if (w.n_classes() != 2) throw InvalidArgument("weighted_bce needs exactly 2 class weights");
  if (y.empty()) throw InvalidArgument("weighted_bce: empty batch");
  const double n = static_cast<double>(y.size());
  BinaryLoss out;
  out.grad.resize(p.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const int yi = y[i];
    if (yi != 0 && yi != 1) throw InvalidArgument("weighted_bce: labels must be 0 or 1");
    const double wi = class_weight(w, yi);
    const double pi = clamp_prob(p[static_cast<Eigen::Index>(i)]);
    out.loss -= wi * (yi == 1 ? std::log(pi) : std::log(1.0 - pi));
    out.grad[static_cast<Eigen::Index>(i)] = wi / n * (p[static_cast<Eigen::Index>(i)] - yi);
  }
  out.loss /= n;
  return out;
}

CategoricalLoss weighted_cce(std::span<const int> y, const Matrix& p, const ClassWeights& w) {
  if (static_cast<Eigen::Index>(y.size()) != p.rows()) {
    throw InvalidArgument("weighted_cce: " + std::to_string(y.size()) + " labels but " +
                          std::to_string(p.rows()) + " probability rows");
  }
  if (p.cols() < 2 || p.cols() != w.n_classes()) {
    throw InvalidArgument("weighted_cce: probability width " + std::to_string(p.cols()) +
                          " does not match " + std::to_string(w.n_classes()) + " class weights");
  }
  if (y.empty()) throw InvalidArgument("weighted_cce: empty batch");
  const double n = static_cast<double>(y.size());
  CategoricalLoss out;
  out.grad = p;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double wi = class_weight(w, y[i]);
    out.loss -= wi * std::log(clamp_prob(p(r, y[i])));
    out.grad(r, y[i]) -= 1.0;
    out.grad.row(r) *= wi / n;
  }
  out.loss /= n;
  return out;
}

CategoricalLoss weighted_cce(const Matrix& y_onehot, const Matrix& p, const ClassWeights& w) {
  if (y_onehot.rows() != p.rows() || y_onehot.cols() != p.cols()) {
    throw InvalidArgument("weighted_cce: one-hot targets and probabilities differ in shape");
  }
  Labels y(static_cast<std::size_t>(y_onehot.rows()));
  for (Eigen::Index i = 0; i < y_onehot.rows(); ++i) {
    Eigen::Index k = 0;
    const double top = y_onehot.row(i).maxCoeff(&k);
    if (top != 1.0 || y_onehot.row(i).sum() != 1.0) {
      throw InvalidArgument("weighted_cce: row " + std::to_string(i) + " is not one-hot");
    }
    y[static_cast<std::size_t>(i)] = static_cast<int>(k);
  }
  return weighted_cce(y, p, w);
}

Matrix one_hot(std::span<const int> y, int n_classes) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(y.size()), n_classes);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0 || y[i] >= n_classes) throw InvalidArgument("one_hot: label out of range");
    m(static_cast<Eigen::Index>(i), y[i]) = 1.0;
  }
  return m;
}

}  // namespace imbench
