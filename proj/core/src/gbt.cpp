#include "imbench/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "imbench/log.hpp"
#include "imbench/losses.hpp"
#include "tree_builder.hpp"

namespace imbench {

void GbtParams::validate() const {
  if (n_estimators < 0) throw InvalidArgument("n_estimators must be non-negative");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw InvalidArgument("learning_rate must lie in (0, 1]");
  }
  if (max_depth < 1 || max_depth > 32) throw InvalidArgument("max_depth must lie in [1, 32]");
  if (!(subsample > 0.0 && subsample <= 1.0)) throw InvalidArgument("subsample must lie in (0, 1]");
  if (!(colsample > 0.0 && colsample <= 1.0)) throw InvalidArgument("colsample must lie in (0, 1]");
  if (!(reg_alpha >= 0.0)) throw InvalidArgument("reg_alpha must be non-negative");
  if (!(reg_lambda >= 0.0)) throw InvalidArgument("reg_lambda must be non-negative");
  if (!(min_child_weight >= 0.0)) throw InvalidArgument("min_child_weight must be non-negative");
}

namespace {

double soft_threshold(double g, double alpha) {
  if (g > alpha) return g - alpha;
  if (g < -alpha) return g + alpha;
  return 0.0;
}

// Second-order regression policy over per-sample gradient g and hessian h.
class NewtonPolicy {
 public:
  struct Stats {
    double g = 0.0;
    double h = 0.0;
    std::size_t count = 0;
    double g_min = std::numeric_limits<double>::infinity();
    double g_max = -std::numeric_limits<double>::infinity();
  };

  NewtonPolicy(const std::vector<double>& g, const std::vector<double>& h, const GbtParams& p)
      : g_(g), h_(h), alpha_(p.reg_alpha), lambda_(p.reg_lambda), min_child_weight_(p.min_child_weight) {}

  Stats stats(const detail::SampleId* ids, std::size_t n) const {
    Stats s;
    for (std::size_t j = 0; j < n; ++j) {
      const double gi = g_[ids[j]];
      s.g += gi;
      s.h += h_[ids[j]];
      s.g_min = std::min(s.g_min, gi);
      s.g_max = std::max(s.g_max, gi);
    }
    s.count = n;
    return s;
  }
  std::size_t count(const Stats& s) const { return s.count; }
  // a node whose samples share one gradient cannot gain from any split
  bool splittable(const Stats& s) const { return s.g_max > s.g_min; }

  void begin_scan(const Stats& parent) {
    parent_ = &parent;
    parent_score_ = score(parent.g, parent.h);
    lg_ = lh_ = 0.0;
    lc_ = 0;
  }
  void add_left(detail::SampleId i) {
    lg_ += g_[i];
    lh_ += h_[i];
    ++lc_;
  }
  bool children_ok() const {
    return lh_ >= min_child_weight_ && parent_->h - lh_ >= min_child_weight_;
  }
  std::size_t left_count() const { return lc_; }
  double gain() const {
    return 0.5 * (score(lg_, lh_) + score(parent_->g - lg_, parent_->h - lh_) - parent_score_);
  }
  bool accept(double gain) const { return gain >= 0.0; }

  std::vector<double> value(const Stats& s, const std::vector<double>*) const {
    return {-soft_threshold(s.g, alpha_) / (std::max(s.h, kHessianFloor) + lambda_)};
  }

 private:
  double score(double g, double h) const {
    const double t = soft_threshold(g, alpha_);
    return t * t / (std::max(h, kHessianFloor) + lambda_);
  }

  const std::vector<double>& g_;
  const std::vector<double>& h_;
  double alpha_;
  double lambda_;
  double min_child_weight_;
  const Stats* parent_ = nullptr;
  double parent_score_ = 0.0;
  double lg_ = 0.0;
  double lh_ = 0.0;
  std::size_t lc_ = 0;
};

double tree_margin(const Tree& t, const double* row) { return t.leaf_for(row).value[0]; }

}  // namespace

GradientBoosting::GradientBoosting(std::vector<double> init_margin,
                                   std::vector<std::vector<Tree>> rounds, int n_features,
                                   GbtParams params)
    : init_margin_(std::move(init_margin)),
      rounds_(std::move(rounds)),
      n_features_(n_features),
      params_(params) {}

Matrix GradientBoosting::predict_margin(const Matrix& features) const {
  check_width(features);
  const int k = n_classes();
  Matrix f(features.rows(), k);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const double* row = features.row(i).data();
    for (int c = 0; c < k; ++c) f(i, c) = init_margin_[static_cast<std::size_t>(c)];
    for (const auto& round : rounds_) {
      for (int c = 0; c < k; ++c) {
        const Tree& t = round[static_cast<std::size_t>(c)];
        if (!t.nodes.empty()) f(i, c) += tree_margin(t, row);
      }
    }
  }
  return f;
}

Matrix GradientBoosting::predict_proba(const Matrix& features) const {
  return softmax(predict_margin(features));
}

nlohmann::json GradientBoosting::to_json() const {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& round : rounds_) {
    nlohmann::json per_class = nlohmann::json::array();
    for (const auto& t : round) per_class.push_back(t.nodes.empty() ? nlohmann::json() : t.to_json());
    rounds.push_back(std::move(per_class));
  }
  return {{"family", "gbt"},
          {"n_classes", n_classes()},
          {"n_features", n_features_},
          {"params",
           {{"n_estimators", params_.n_estimators},
            {"learning_rate", params_.learning_rate},
            {"max_depth", params_.max_depth},
            {"subsample", params_.subsample},
            {"colsample", params_.colsample},
            {"reg_alpha", params_.reg_alpha},
            {"reg_lambda", params_.reg_lambda},
            {"min_child_weight", params_.min_child_weight}}},
          {"init_margin", init_margin_},
          {"rounds", std::move(rounds)}};
}

GradientBoosting gbt_fit(const Dataset& train, const GbtParams& params, const ClassWeights& w,
                         std::uint64_t seed) {
  params.validate();
  const std::size_t n = train.rows();
  const int k = train.n_classes();
  const int d = static_cast<int>(train.n_features());
  if (n == 0) throw InvalidArgument("gbt_fit: empty training set");
  if (w.n_classes() != k) throw InvalidArgument("gbt_fit: weight/class count mismatch");

  std::vector<double> init(static_cast<std::size_t>(k), 0.0);
  {
    const auto counts = class_counts(train.labels, k);
    for (int c = 0; c < k; ++c) {
      const auto cnt = counts[static_cast<std::size_t>(c)];
      if (cnt == 0) throw InvalidArgument("gbt_fit: class " + std::to_string(c) + " has no samples");
      init[static_cast<std::size_t>(c)] = std::log(static_cast<double>(cnt) / static_cast<double>(n));
    }
  }

  Matrix margin(static_cast<Eigen::Index>(n), k);
  for (int c = 0; c < k; ++c) margin.col(c).setConstant(init[static_cast<std::size_t>(c)]);

  const auto base_orders = detail::presort(train.features);
  detail::GrowLimits limits{params.max_depth, 2, 1, 0};
  const int n_cols = std::clamp(static_cast<int>(std::floor(params.colsample * d)), 1, d);

  GradientBoosting model(init, {}, d, params);
  std::mt19937_64 rng(seed);
  std::vector<double> g(n), h(n);
  std::vector<char> keep(n, 1);
  std::vector<int> columns(static_cast<std::size_t>(d));

  auto record_loss = [&](const Matrix& p) {
    model.train_loss_.push_back(weighted_cce(train.labels, p, w).loss);
  };
  Matrix p = softmax(margin);
  record_loss(p);

  for (int r = 0; r < params.n_estimators; ++r) {
    bool any_row = true;
    if (params.subsample < 1.0) {
      std::bernoulli_distribution take(params.subsample);
      any_row = false;
      for (std::size_t i = 0; i < n; ++i) {
        keep[i] = take(rng) ? 1 : 0;
        any_row = any_row || keep[i];
      }
    }
    const auto round_orders =
        params.subsample < 1.0 ? detail::filter_orders(base_orders, keep) : base_orders;

    std::vector<Tree> round(static_cast<std::size_t>(k));
    bool grew_any = false;
    for (int c = 0; c < k; ++c) {
      std::vector<int> feats;
      if (n_cols < d) {
        std::iota(columns.begin(), columns.end(), 0);
        std::shuffle(columns.begin(), columns.end(), rng);
        feats.assign(columns.begin(), columns.begin() + n_cols);
        std::sort(feats.begin(), feats.end());
      }
      if (!any_row) continue;
      double h_total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const int y = train.labels[i];
        const double wi = w[y];
        const double pic = p(static_cast<Eigen::Index>(i), c);
        g[i] = wi * (pic - (y == c ? 1.0 : 0.0));
        h[i] = wi * pic * (1.0 - pic);
        if (keep[i]) h_total += h[i];
      }
      if (h_total < kHessianFloor) continue;

      NewtonPolicy policy(g, h, params);
      detail::TreeGrower grower(train.features, round_orders, policy, limits, nullptr, std::move(feats));
      Tree tree = grower.grow();
      for (auto& node : tree.nodes) node.value[0] *= params.learning_rate;
      round[static_cast<std::size_t>(c)] = std::move(tree);
      grew_any = true;
    }
    if (!grew_any) {
      ++model.skipped_rounds_;
      log::warn("gbt round " + std::to_string(r) + " skipped: hessian sums below floor");
    } else {
      for (int c = 0; c < k; ++c) {
        const Tree& t = round[static_cast<std::size_t>(c)];
        if (t.nodes.empty()) continue;
        for (std::size_t i = 0; i < n; ++i) {
          margin(static_cast<Eigen::Index>(i), c) +=
              tree_margin(t, train.features.row(static_cast<Eigen::Index>(i)).data());
        }
      }
      p = softmax(margin);
    }
    record_loss(p);
    model.rounds_.push_back(std::move(round));
  }
  return model;
}

}  // namespace imbench
