#include "imbench/tabresnet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "imbench/eval.hpp"
#include "imbench/forest.hpp"
#include "imbench/losses.hpp"

namespace imbench {

void TabResNetConfig::validate() const {
  if (input_dim < 1) throw InvalidArgument("input_dim must be at least 1");
  if (n_classes < 2) throw InvalidArgument("n_classes must be at least 2");
  if (hidden_dim < 0) throw InvalidArgument("hidden_dim must be non-negative (0 = default)");
  if (n_blocks < 1 || n_blocks > 4) throw InvalidArgument("n_blocks must lie in [1, 4]");
  if (!(dropout_rate >= 0.0 && dropout_rate <= 0.5)) {
    throw InvalidArgument("dropout_rate must lie in [0, 0.5]");
  }
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw InvalidArgument("learning_rate must lie in (0, 1]");
  }
  if (!(weight_decay >= 0.0 && weight_decay <= 1.0)) {
    throw InvalidArgument("weight_decay must lie in [0, 1]");
  }
  if (batch_size < 2) throw InvalidArgument("batch_size must be at least 2");
  if (max_epochs < 1) throw InvalidArgument("max_epochs must be at least 1");
  if (patience < 1) throw InvalidArgument("patience must be at least 1");
  if (lr_patience < 1) throw InvalidArgument("lr_patience must be at least 1");
  if (!(lr_factor > 0.0 && lr_factor < 1.0)) throw InvalidArgument("lr_factor must lie in (0, 1)");
  if (binary_output && n_classes != 2) throw InvalidArgument("binary_output needs exactly 2 classes");
}

int clamp_hidden_dim(int requested, int input_dim) {
  const int lo = std::max(8, (input_dim + 1) / 2);
  const int hi = 2 * input_dim;
  const int want = requested > 0 ? requested : std::max(8, input_dim);
  return std::max(lo, std::min(want, hi));
}

namespace nn {

Matrix Linear::forward(const Matrix& x, bool keep) {
  if (keep) input = x;
  Matrix y = x * w.value;
  y.rowwise() += b.value.row(0);
  return y;
}

Matrix Linear::backward(const Matrix& dy) {
  w.grad.noalias() += input.transpose() * dy;
  b.grad += dy.colwise().sum();
  return dy * w.value.transpose();
}

Matrix BatchNorm::forward(const Matrix& x, Mode mode) {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd istd;
  if (mode == Mode::Train) {
    if (x.rows() < 2) throw InvalidArgument("batch norm needs at least 2 rows in train mode");
    const double n = static_cast<double>(x.rows());
    mean = x.colwise().mean();
    const Matrix centred = x.rowwise() - mean;
    const Eigen::RowVectorXd var = centred.array().square().colwise().sum().matrix() / n;
    istd = (var.array() + eps).rsqrt().matrix();
    running_mean = (1.0 - momentum) * running_mean + momentum * mean;
    running_var = (1.0 - momentum) * running_var + momentum * (var * (n / (n - 1.0)));
  } else {
    mean = running_mean;
    istd = (running_var.array() + eps).rsqrt().matrix();
  }
  Matrix xhat = (x.rowwise() - mean).array().rowwise() * istd.array();
  Matrix y = xhat.array().rowwise() * gamma.value.row(0).array();
  y.rowwise() += beta.value.row(0);
  if (mode != Mode::Eval) {
    normalized = std::move(xhat);
    inv_std = istd;
    batch_stats = mode == Mode::Train;
  }
  return y;
}

Matrix BatchNorm::backward(const Matrix& dy) {
  gamma.grad += (dy.array() * normalized.array()).colwise().sum().matrix();
  beta.grad += dy.colwise().sum();
  const Matrix dxhat = dy.array().rowwise() * gamma.value.row(0).array();
  if (!batch_stats) return dxhat.array().rowwise() * inv_std.array();
  const double n = static_cast<double>(dy.rows());
  const Eigen::RowVectorXd sum_dxhat = dxhat.colwise().sum();
  const Eigen::RowVectorXd sum_dxhat_xhat = (dxhat.array() * normalized.array()).colwise().sum();
  Matrix dx = (n * dxhat).rowwise() - sum_dxhat;
  dx -= (normalized.array().rowwise() * sum_dxhat_xhat.array()).matrix();
  dx = dx.array().rowwise() * (inv_std.array() / n);
  return dx;
}

Matrix inverted_dropout(const Matrix& x, double rate, std::mt19937_64& rng, Matrix* mask) {
  const double keep = 1.0 - rate;
  std::bernoulli_distribution draw(keep);
  Matrix m(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = draw(rng) ? 1.0 / keep : 0.0;
  Matrix y = x.cwiseProduct(m);
  if (mask) *mask = std::move(m);
  return y;
}

}  // namespace nn

namespace {

Param make_param(std::string name, Eigen::Index rows, Eigen::Index cols) {
  return {std::move(name), Eigen::MatrixXd::Zero(rows, cols), Eigen::MatrixXd::Zero(rows, cols)};
}

nn::Linear make_linear(const std::string& name, int in, int out, std::mt19937_64& rng) {
  nn::Linear l{make_param(name + ".weight", in, out), make_param(name + ".bias", 1, out), {}};
  const double bound = std::sqrt(6.0 / in);
  std::uniform_real_distribution<double> u(-bound, bound);
  for (Eigen::Index j = 0; j < l.w.value.cols(); ++j) {
    for (Eigen::Index i = 0; i < l.w.value.rows(); ++i) l.w.value(i, j) = u(rng);
  }
  return l;
}

nn::BatchNorm make_bn(const std::string& name, int width) {
  nn::BatchNorm bn;
  bn.gamma = make_param(name + ".gamma", 1, width);
  bn.gamma.value.setOnes();
  bn.beta = make_param(name + ".beta", 1, width);
  bn.running_mean = Eigen::RowVectorXd::Zero(width);
  bn.running_var = Eigen::RowVectorXd::Ones(width);
  return bn;
}

// relu with the derivative mask kept when `mask` is non-null
Matrix relu(const Matrix& x, Matrix* mask) {
  if (mask) *mask = (x.array() > 0.0).cast<double>();
  return x.cwiseMax(0.0);
}

}  // namespace

TabResNet::TabResNet(TabResNetConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  hidden_ = clamp_hidden_dim(cfg_.hidden_dim, cfg_.input_dim);
  std::mt19937_64 rng(cfg_.seed);
  input_ = make_linear("input", cfg_.input_dim, hidden_, rng);
  input_bn_ = make_bn("input.bn", hidden_);
  for (int b = 0; b < cfg_.n_blocks; ++b) {
    const std::string name = "block" + std::to_string(b);
    nn::ResidualBlock block;
    block.fc1 = make_linear(name + ".fc1", hidden_, hidden_, rng);
    block.bn1 = make_bn(name + ".bn1", hidden_);
    block.fc2 = make_linear(name + ".fc2", hidden_, hidden_, rng);
    block.bn2 = make_bn(name + ".bn2", hidden_);
    blocks_.push_back(std::move(block));
  }
  int width = hidden_;
  if (cfg_.use_reduction) {
    reduction_ = make_linear("reduction", hidden_, std::max(1, hidden_ / 2), rng);
    width = std::max(1, hidden_ / 2);
  }
  out_ = make_linear("output", width, output_width(), rng);
  dropout_rng_.seed(derive_seed(cfg_.seed, 1));
}

int TabResNet::output_width() const { return cfg_.binary_output ? 1 : cfg_.n_classes; }

Matrix TabResNet::dropout(const Matrix& x, Mode mode, Matrix* mask) {
  if (mode != Mode::Train || cfg_.dropout_rate == 0.0) {
    if (mask) mask->setOnes(x.rows(), x.cols());
    return x;
  }
  return nn::inverted_dropout(x, cfg_.dropout_rate, dropout_rng_, mask);
}

Matrix TabResNet::block_forward(int b, const Matrix& h, Mode mode) {
  auto& blk = blocks_.at(static_cast<std::size_t>(b));
  const bool keep = mode != Mode::Eval;
  Matrix relu_mask;
  Matrix drop_mask;
  Matrix a = relu(blk.bn1.forward(blk.fc1.forward(h, keep), mode), keep ? &relu_mask : nullptr);
  a = dropout(a, mode, keep ? &drop_mask : nullptr);
  Matrix z = blk.bn2.forward(blk.fc2.forward(a, keep), mode) + h;
  Matrix out = relu(z, keep ? &blk.mask_out : nullptr);
  if (keep) blk.mask1 = relu_mask.cwiseProduct(drop_mask);
  return out;
}

Matrix TabResNet::forward(const Matrix& x, Mode mode) {
  if (x.cols() != cfg_.input_dim) {
    throw InvalidArgument("TabResNet expects " + std::to_string(cfg_.input_dim) + " features, got " +
                          std::to_string(x.cols()));
  }
  const bool keep = mode != Mode::Eval;
  Matrix relu_mask;
  Matrix drop_mask;
  Matrix h = relu(input_bn_.forward(input_.forward(x, keep), mode), keep ? &relu_mask : nullptr);
  h = dropout(h, mode, keep ? &drop_mask : nullptr);
  if (keep) input_mask_ = relu_mask.cwiseProduct(drop_mask);
  for (int b = 0; b < cfg_.n_blocks; ++b) h = block_forward(b, h, mode);
  if (cfg_.use_reduction) h = relu(reduction_.forward(h, keep), keep ? &reduction_mask_ : nullptr);
  return out_.forward(h, keep);
}

Matrix TabResNet::logits(const Matrix& x) const {
  // Eval mode writes no caches and draws no dropout masks
  TabResNet& self = const_cast<TabResNet&>(*this);
  return self.forward(x, Mode::Eval);
}

void TabResNet::backward(const Matrix& d_output) {
  Matrix g = out_.backward(d_output);
  if (cfg_.use_reduction) g = reduction_.backward(g.cwiseProduct(reduction_mask_));
  for (int b = cfg_.n_blocks - 1; b >= 0; --b) {
    auto& blk = blocks_[static_cast<std::size_t>(b)];
    const Matrix dz = g.cwiseProduct(blk.mask_out);
    Matrix da = blk.fc2.backward(blk.bn2.backward(dz));
    da = da.cwiseProduct(blk.mask1);
    g = blk.fc1.backward(blk.bn1.backward(da)) + dz;
  }
  g = g.cwiseProduct(input_mask_);
  input_.backward(input_bn_.backward(g));
}

void TabResNet::zero_grad() {
  for (Param* p : parameters()) p->grad.setZero();
}

std::pair<double, Matrix> TabResNet::loss(const Matrix& output, std::span<const int> y,
                                          const ClassWeights& w) const {
  if (cfg_.binary_output) {
    const Vector z = output.col(0);
    auto r = weighted_bce(y, sigmoid(z), w);
    Matrix g(output.rows(), 1);
    g.col(0) = r.grad;
    return {r.loss, std::move(g)};
  }
  auto r = weighted_cce(y, softmax(output), w);
  return {r.loss, std::move(r.grad)};
}

Matrix TabResNet::predict_proba(const Matrix& features) const {
  check_width(features);
  const Matrix z = logits(features);
  if (!cfg_.binary_output) return softmax(z);
  const Vector p1 = sigmoid(z.col(0));
  Matrix p(z.rows(), 2);
  p.col(0) = Vector::Ones(p1.size()) - p1;
  p.col(1) = p1;
  return p;
}

std::vector<Param*> TabResNet::parameters() {
  std::vector<Param*> ps{&input_.w, &input_.b, &input_bn_.gamma, &input_bn_.beta};
  for (auto& blk : blocks_) {
    for (Param* p : {&blk.fc1.w, &blk.fc1.b, &blk.bn1.gamma, &blk.bn1.beta, &blk.fc2.w, &blk.fc2.b,
                     &blk.bn2.gamma, &blk.bn2.beta}) {
      ps.push_back(p);
    }
  }
  if (cfg_.use_reduction) {
    ps.push_back(&reduction_.w);
    ps.push_back(&reduction_.b);
  }
  ps.push_back(&out_.w);
  ps.push_back(&out_.b);
  return ps;
}

std::size_t TabResNet::n_parameters() const {
  std::size_t n = 0;
  for (const Param* p : const_cast<TabResNet*>(this)->parameters()) {
    n += static_cast<std::size_t>(p->value.size());
  }
  return n;
}

std::vector<nn::BatchNorm*> TabResNet::batch_norms() {
  std::vector<nn::BatchNorm*> out{&input_bn_};
  for (auto& blk : blocks_) {
    out.push_back(&blk.bn1);
    out.push_back(&blk.bn2);
  }
  return out;
}

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) values.push_back(m(i, j));
  }
  return {{"shape", {m.rows(), m.cols()}}, {"values", std::move(values)}};
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto shape = j.at("shape").get<std::vector<Eigen::Index>>();
  const auto values = j.at("values").get<std::vector<double>>();
  if (shape.size() != 2 || static_cast<std::size_t>(shape[0] * shape[1]) != values.size()) {
    throw InvalidArgument("parameter JSON shape does not match its values");
  }
  Eigen::MatrixXd m(shape[0], shape[1]);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index jj = 0; jj < m.cols(); ++jj) m(i, jj) = values[k++];
  }
  return m;
}

}  // namespace

nlohmann::json TabResNet::to_json() const {
  auto& self = const_cast<TabResNet&>(*this);
  nlohmann::json params = nlohmann::json::object();
  for (const Param* p : self.parameters()) params[p->name] = matrix_json(p->value);
  nlohmann::json running = nlohmann::json::array();
  for (const nn::BatchNorm* bn : self.batch_norms()) {
    running.push_back({{"mean", matrix_json(bn->running_mean)}, {"var", matrix_json(bn->running_var)}});
  }
  return {{"family", "tabresnet"},
          {"n_classes", cfg_.n_classes},
          {"n_features", cfg_.input_dim},
          {"config",
           {{"input_dim", cfg_.input_dim},
            {"n_classes", cfg_.n_classes},
            {"hidden_dim", hidden_},
            {"n_blocks", cfg_.n_blocks},
            {"use_reduction", cfg_.use_reduction},
            {"dropout_rate", cfg_.dropout_rate},
            {"learning_rate", cfg_.learning_rate},
            {"weight_decay", cfg_.weight_decay},
            {"batch_size", cfg_.batch_size},
            {"max_epochs", cfg_.max_epochs},
            {"binary_output", cfg_.binary_output},
            {"seed", cfg_.seed}}},
          {"best_epoch", history_.best_epoch},
          {"parameters", std::move(params)},
          {"batch_norm_running", std::move(running)}};
}

TabResNet TabResNet::from_json(const nlohmann::json& j) {
  const auto& c = j.at("config");
  TabResNetConfig cfg;
  cfg.input_dim = c.at("input_dim").get<int>();
  cfg.n_classes = c.at("n_classes").get<int>();
  cfg.hidden_dim = c.at("hidden_dim").get<int>();
  cfg.n_blocks = c.at("n_blocks").get<int>();
  cfg.use_reduction = c.at("use_reduction").get<bool>();
  cfg.dropout_rate = c.at("dropout_rate").get<double>();
  cfg.learning_rate = c.at("learning_rate").get<double>();
  cfg.weight_decay = c.at("weight_decay").get<double>();
  cfg.batch_size = c.at("batch_size").get<int>();
  cfg.max_epochs = c.at("max_epochs").get<int>();
  cfg.binary_output = c.at("binary_output").get<bool>();
  cfg.seed = c.at("seed").get<std::uint64_t>();
  TabResNet model(cfg);
  const auto& params = j.at("parameters");
  for (Param* p : model.parameters()) {
    Eigen::MatrixXd m = matrix_from_json(params.at(p->name));
    if (m.rows() != p->value.rows() || m.cols() != p->value.cols()) {
      throw InvalidArgument("parameter " + p->name + " has the wrong shape");
    }
    p->value = std::move(m);
  }
  const auto& running = j.at("batch_norm_running");
  auto bns = model.batch_norms();
  if (running.size() != bns.size()) throw InvalidArgument("batch-norm state count mismatch");
  for (std::size_t i = 0; i < bns.size(); ++i) {
    bns[i]->running_mean = matrix_from_json(running[i].at("mean")).row(0);
    bns[i]->running_var = matrix_from_json(running[i].at("var")).row(0);
  }
  return model;
}

PlateauMonitor::PlateauMonitor(int patience, int lr_patience, double lr_factor, double learning_rate,
                               double min_delta)
    : patience_(patience),
      lr_patience_(lr_patience),
      lr_factor_(lr_factor),
      lr_(learning_rate),
      min_delta_(min_delta),
      best_(-std::numeric_limits<double>::infinity()) {}

PlateauMonitor::Step PlateauMonitor::update(double score) {
  Step step;
  if (score > best_ + min_delta_) {
    best_ = score;
    best_epoch_ = epoch_;
    since_best_ = 0;
    since_lr_ = 0;
    step.improved = true;
  } else {
    ++since_best_;
    ++since_lr_;
    if (since_lr_ >= lr_patience_) {
      lr_ *= lr_factor_;
      since_lr_ = 0;
      step.lr_reduced = true;
    }
    step.stop = since_best_ >= patience_;
  }
  ++epoch_;
  return step;
}

namespace {

class AdamW {
 public:
  AdamW(const std::vector<Param*>& params, double weight_decay) : wd_(weight_decay) {
    for (const Param* p : params) {
      m_.push_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
      v_.push_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
    }
  }

  void step(const std::vector<Param*>& params, double lr) {
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, t_);
    const double c2 = 1.0 - std::pow(kBeta2, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
      Param& p = *params[i];
      p.value *= 1.0 - lr * wd_;
      m_[i] = kBeta1 * m_[i] + (1.0 - kBeta1) * p.grad;
      v_[i] = kBeta2 * v_[i] + (1.0 - kBeta2) * p.grad.cwiseAbs2();
      p.value.array() -= lr * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + kEps);
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
  double wd_;
  int t_ = 0;
  std::vector<Eigen::MatrixXd> m_;
  std::vector<Eigen::MatrixXd> v_;
};

Matrix gather_rows(const Matrix& x, const IndexList& idx, std::size_t begin, std::size_t end) {
  Matrix out(static_cast<Eigen::Index>(end - begin), x.cols());
  for (std::size_t r = begin; r < end; ++r) out.row(static_cast<Eigen::Index>(r - begin)) = x.row(static_cast<Eigen::Index>(idx[r]));
  return out;
}

double weighted_f1_of(const TabResNet& model, const Dataset& data) {
  const Labels pred = argmax_rows(model.predict_proba(data.features));
  return f1_scores(confusion(data.labels, pred, data.n_classes())).weighted_f1;
}

}  // namespace

TabResNet tabresnet_fit(const Dataset& train, const Dataset& validation, const TabResNetConfig& cfg_in,
                        const ClassWeights& w) {
  TabResNetConfig cfg = cfg_in;
  if (cfg.input_dim == 0) cfg.input_dim = static_cast<int>(train.n_features());
  if (cfg.n_classes == 0) cfg.n_classes = train.n_classes();
  if (cfg.input_dim != static_cast<int>(train.n_features()) || cfg.n_classes != train.n_classes()) {
    throw InvalidArgument("TabResNet config does not match the training data shape");
  }
  if (validation.n_features() != train.n_features() || validation.rows() == 0) {
    throw InvalidArgument("TabResNet needs a non-empty validation set of the same width");
  }
  if (w.n_classes() != train.n_classes()) throw InvalidArgument("TabResNet: weight/class count mismatch");
  if (train.rows() < 2) throw InvalidArgument("TabResNet needs at least 2 training samples");

  TabResNet model(cfg);
  TabResNet best = model;
  AdamW opt(model.parameters(), cfg.weight_decay);
  PlateauMonitor monitor(cfg.patience, cfg.lr_patience, cfg.lr_factor, cfg.learning_rate);
  std::mt19937_64 shuffle_rng(derive_seed(cfg.seed, 2));

  IndexList order(train.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch = static_cast<std::size_t>(cfg.batch_size);
  Labels y_batch;
  TabResNet::History history;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    const double lr = monitor.learning_rate();
    double loss_sum = 0.0;
    int n_batches = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += batch) {
      const std::size_t end = std::min(order.size(), begin + batch);
      if (end - begin < 2) break;  // batch norm needs two rows
      const Matrix xb = gather_rows(train.features, order, begin, end);
      y_batch.clear();
      for (std::size_t r = begin; r < end; ++r) y_batch.push_back(train.labels[order[r]]);

      model.zero_grad();
      const Matrix out = model.forward(xb, Mode::Train);
      auto [loss, grad] = model.loss(out, y_batch, w);
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "non-finite training loss at epoch " << epoch << ", batch " << n_batches
            << ", learning rate " << lr;
        throw NumericError(msg.str());
      }
      model.backward(grad);
      opt.step(model.parameters(), lr);
      loss_sum += loss;
      ++n_batches;
    }
    const double f1 = weighted_f1_of(model, validation);
    history.train_loss.push_back(n_batches ? loss_sum / n_batches : 0.0);
    history.val_f1.push_back(f1);
    history.learning_rate.push_back(lr);
    history.epochs_run = epoch + 1;
    const auto step = monitor.update(f1);
    if (step.improved) best = model;
    if (step.stop) break;
  }
  history.best_epoch = monitor.best_epoch();
  best.history_ = std::move(history);
  return best;
}

namespace {
// Gradients smaller than this are compared absolutely; central differences of
// an exactly zero gradient carry rounding noise near 1e-10.
constexpr double kGradientFloor = 1e-5;
}  // namespace

GradientCheckReport gradient_check(TabResNet& model, const Matrix& x, std::span<const int> y,
                                   const ClassWeights& w, Mode mode, double h) {
  if (model.config().dropout_rate != 0.0) throw InvalidArgument("gradient_check needs dropout 0");
  if (mode == Mode::Eval) throw InvalidArgument("gradient_check needs Train or Frozen mode");
  // batch statistics would drift the running averages; restore them afterwards
  std::vector<std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd>> saved;
  for (auto* bn : model.batch_norms()) saved.emplace_back(bn->running_mean, bn->running_var);
  auto restore_running = [&] {
    auto bns = model.batch_norms();
    for (std::size_t i = 0; i < bns.size(); ++i) {
      bns[i]->running_mean = saved[i].first;
      bns[i]->running_var = saved[i].second;
    }
  };
  auto eval_loss = [&] {
    const double l = model.loss(model.forward(x, mode), y, w).first;
    restore_running();
    return l;
  };

  model.zero_grad();
  const Matrix out = model.forward(x, mode);
  restore_running();
  model.backward(model.loss(out, y, w).second);

  GradientCheckReport report;
  for (Param* p : model.parameters()) {
    for (Eigen::Index i = 0; i < p->value.size(); ++i) {
      double& v = p->value.data()[i];
      const double orig = v;
      v = orig + h;
      const double up = eval_loss();
      v = orig - h;
      const double down = eval_loss();
      v = orig;
      const double numeric = (up - down) / (2.0 * h);
      const double analytic = p->grad.data()[i];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), kGradientFloor});
      const double err = std::abs(analytic - numeric) / denom;
      if (report.worst_parameter.empty() || err > report.max_rel_error) {
        report.max_rel_error = err;
        report.worst_parameter = p->name;
      }
      ++report.n_checked;
    }
  }
  return report;
}

}  // namespace imbench
