#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "imbench/classifier.hpp"
#include "imbench/dataset.hpp"
#include "imbench/weighting.hpp"

namespace imbench {

struct TabResNetConfig {
  int input_dim = 0;   // filled from the data at fit time when 0
  int n_classes = 0;   // likewise
  int hidden_dim = 0;  // 0 => max(8, input_dim); always passed through clamp_hidden_dim
  int n_blocks = 2;
  bool use_reduction = false;
  double dropout_rate = 0.1;
  double learning_rate = 1e-3;
  double weight_decay = 1e-4;
  int batch_size = 128;
  int max_epochs = 100;
  int patience = 15;
  double lr_factor = 0.5;
  int lr_patience = 3;
  // single sigmoid logit trained with weighted BCE (K = 2 only)
  bool binary_output = false;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Hidden width restricted to [max(8, ceil(d/2)), 2d]; the lower bound wins
/// when the interval is empty.
int clamp_hidden_dim(int requested, int input_dim);

/// Train: batch statistics and dropout. Frozen: running statistics, no
/// dropout, but caches kept for backward. Eval: running statistics, no caches.
enum class Mode { Train, Frozen, Eval };

struct Param {
  std::string name;
  Eigen::MatrixXd value;
  Eigen::MatrixXd grad;
};

namespace nn {

struct Linear {
  Param w;  // in x out
  Param b;  // 1 x out
  Matrix input;

  Matrix forward(const Matrix& x, bool keep);
  Matrix backward(const Matrix& dy);
};

struct BatchNorm {
  Param gamma;  // 1 x width
  Param beta;
  Eigen::RowVectorXd running_mean;
  Eigen::RowVectorXd running_var;
  double momentum = 0.1;
  double eps = 1e-5;
  // caches from the last Train/Frozen forward
  Matrix normalized;
  Eigen::RowVectorXd inv_std;
  bool batch_stats = false;

  Matrix forward(const Matrix& x, Mode mode);
  Matrix backward(const Matrix& dy);
};

/// Inverted dropout: each entry is kept with probability 1 - rate and scaled
/// by 1 / (1 - rate). `mask` receives the per-entry multipliers.
Matrix inverted_dropout(const Matrix& x, double rate, std::mt19937_64& rng, Matrix* mask = nullptr);

struct ResidualBlock {
  Linear fc1;
  BatchNorm bn1;
  Linear fc2;
  BatchNorm bn2;
  Matrix mask1;     // relu * dropout scale after bn1
  Matrix mask_out;  // relu after the skip addition
};

}  // namespace nn

class TabResNet final : public Classifier {
 public:
  /// Builds and initialises the network (He-uniform linear weights, zero
  /// biases, unit batch-norm scale).
  explicit TabResNet(TabResNetConfig cfg);

  ModelFamily family() const override { return ModelFamily::TabResNet; }
  int n_classes() const override { return cfg_.n_classes; }
  int n_features() const override { return cfg_.input_dim; }
  Matrix predict_proba(const Matrix& features) const override;
  nlohmann::json to_json() const override;
  static TabResNet from_json(const nlohmann::json& j);

  const TabResNetConfig& config() const { return cfg_; }
  int hidden_dim() const { return hidden_; }
  int output_width() const;

  /// Raw network outputs: N x K, or N x 1 in binary mode.
  Matrix forward(const Matrix& x, Mode mode);
  Matrix logits(const Matrix& x) const;
  /// Accumulates parameter gradients from d loss / d output.
  void backward(const Matrix& d_output);
  void zero_grad();

  /// Weighted loss on the current outputs and its gradient w.r.t. them.
  std::pair<double, Matrix> loss(const Matrix& output, std::span<const int> y,
                                 const ClassWeights& w) const;

  std::vector<Param*> parameters();
  std::size_t n_parameters() const;
  std::vector<nn::BatchNorm*> batch_norms();

  /// One residual block applied on its own (exposed for inspection).
  Matrix block_forward(int block, const Matrix& h, Mode mode);

  nn::Linear& input_layer() { return input_; }
  nn::Linear& output_layer() { return out_; }
  std::vector<nn::ResidualBlock>& blocks() { return blocks_; }

  struct History {
    std::vector<double> train_loss;  // mean batch loss per epoch
    std::vector<double> val_f1;      // weighted F1 per epoch
    std::vector<double> learning_rate;
    int best_epoch = -1;
    int epochs_run = 0;
  };
  const History& history() const { return history_; }

 private:
  friend TabResNet tabresnet_fit(const Dataset&, const Dataset&, const TabResNetConfig&,
                                 const ClassWeights&);
  Matrix dropout(const Matrix& x, Mode mode, Matrix* mask);

  TabResNetConfig cfg_;
  int hidden_ = 0;
  nn::Linear input_;
  nn::BatchNorm input_bn_;
  Matrix input_mask_;
  std::vector<nn::ResidualBlock> blocks_;
  nn::Linear reduction_;
  Matrix reduction_mask_;
  nn::Linear out_;
  std::mt19937_64 dropout_rng_;
  History history_;
};

/// Early stopping and learning-rate plateau schedule on a score that should
/// increase. A score improves only when it beats the best by more than
/// `min_delta`.
class PlateauMonitor {
 public:
  PlateauMonitor(int patience, int lr_patience, double lr_factor, double learning_rate,
                 double min_delta = 1e-6);

  struct Step {
    bool improved = false;
    bool lr_reduced = false;
    bool stop = false;
  };
  Step update(double score);

  double learning_rate() const { return lr_; }
  int best_epoch() const { return best_epoch_; }
  double best_score() const { return best_; }
  int epochs() const { return epoch_; }

 private:
  int patience_;
  int lr_patience_;
  double lr_factor_;
  double lr_;
  double min_delta_;
  double best_;
  int best_epoch_ = -1;
  int epoch_ = 0;
  int since_best_ = 0;
  int since_lr_ = 0;
};

/// Minibatch AdamW on the weighted cross-entropy; validation weighted F1
/// drives the plateau schedule and early stopping, and the best epoch's
/// parameters are restored. Throws NumericError on a non-finite loss.
TabResNet tabresnet_fit(const Dataset& train, const Dataset& validation, const TabResNetConfig& cfg,
                        const ClassWeights& w);

struct GradientCheckReport {
  double max_rel_error = 0.0;
  std::string worst_parameter;
  std::size_t n_checked = 0;
};

/// Analytic parameter gradients of the weighted loss against central
/// differences with step h. Dropout must be 0; Mode::Frozen uses running
/// statistics, Mode::Train batch statistics. The relative error divides by
/// max(|analytic|, |numeric|, 1e-5).
GradientCheckReport gradient_check(TabResNet& model, const Matrix& x, std::span<const int> y,
                                   const ClassWeights& w, Mode mode = Mode::Frozen, double h = 1e-5);

}  // namespace imbench
