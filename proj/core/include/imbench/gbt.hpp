#pragma once

#include <cstdint>
#include <vector>

#include "imbench/tree.hpp"

namespace imbench {

struct GbtParams {
  int n_estimators = 200;
  double learning_rate = 0.1;
  int max_depth = 6;
  double subsample = 1.0;
  double colsample = 1.0;
  double reg_alpha = 0.0;   // L1 on leaf values
  double reg_lambda = 1.0;  // L2 on leaf values
  double min_child_weight = 1.0;

  void validate() const;
};

inline constexpr double kHessianFloor = 1e-16;

/// Multiclass softmax boosting: one regression tree per class and round.
class GradientBoosting final : public Classifier {
 public:
  GradientBoosting(std::vector<double> init_margin, std::vector<std::vector<Tree>> rounds,
                   int n_features, GbtParams params);

  ModelFamily family() const override { return ModelFamily::Gbt; }
  int n_classes() const override { return static_cast<int>(init_margin_.size()); }
  int n_features() const override { return n_features_; }
  Matrix predict_proba(const Matrix& features) const override;
  Matrix predict_margin(const Matrix& features) const;
  nlohmann::json to_json() const override;

  /// rounds()[r][k] is the tree for class k in round r (empty tree = skipped).
  const std::vector<std::vector<Tree>>& rounds() const { return rounds_; }
  /// Weighted training CCE before the first round and after every round.
  const std::vector<double>& train_loss() const { return train_loss_; }
  int skipped_rounds() const { return skipped_rounds_; }

 private:
  friend GradientBoosting gbt_fit(const Dataset&, const GbtParams&, const ClassWeights&,
                                  std::uint64_t);
  std::vector<double> init_margin_;
  std::vector<std::vector<Tree>> rounds_;
  int n_features_;
  GbtParams params_;
  std::vector<double> train_loss_;
  int skipped_rounds_ = 0;
};

/// Newton boosting on the class-weighted softmax cross-entropy. Leaf values
/// are -T_alpha(G) / (H + lambda) with G, H the leaf's gradient and hessian
/// sums and T_alpha soft-thresholding; they are shrunk by the learning rate.
GradientBoosting gbt_fit(const Dataset& train, const GbtParams& params, const ClassWeights& w,
                         std::uint64_t seed);

}  // namespace imbench
