#include "imbench/model.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <string>

#include "csv_util.hpp"

namespace imbench {

std::string_view to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::DecisionTree: return "dt";
    case ModelFamily::RandomForest: return "rf";
    case ModelFamily::Gbt: return "gbt";
    case ModelFamily::TabResNet: return "tabresnet";
  }
  return "dt";
}

ModelFamily parse_family(std::string_view name) {
  for (auto f : kAllFamilies) {
    if (to_string(f) == name) return f;
  }
  throw InvalidArgument("unknown model family '" + std::string(name) +
                        "' (expected dt, rf, gbt or tabresnet)");
}

Labels Classifier::predict(const Matrix& features) const {
  const Matrix p = predict_proba(features);
  Labels out(static_cast<std::size_t>(p.rows()));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < p.cols(); ++j) {
      if (p(i, j) > p(i, best)) best = j;
    }
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

void Classifier::check_width(const Matrix& features) const {
  if (features.cols() != n_features()) {
    throw InvalidArgument("model expects " + std::to_string(n_features()) + " features, got " +
                          std::to_string(features.cols()));
  }
}

ModelFamily family_of(const HyperParams& params) {
  return std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TreeParams>) return ModelFamily::DecisionTree;
        if constexpr (std::is_same_v<T, ForestParams>) return ModelFamily::RandomForest;
        if constexpr (std::is_same_v<T, GbtParams>) return ModelFamily::Gbt;
        if constexpr (std::is_same_v<T, TabResNetConfig>) return ModelFamily::TabResNet;
      },
      params);
}

HyperParams default_hyperparams(ModelFamily family) {
  switch (family) {
    case ModelFamily::DecisionTree: return TreeParams{};
    case ModelFamily::RandomForest: return ForestParams{};
    case ModelFamily::Gbt: return GbtParams{};
    case ModelFamily::TabResNet: return TabResNetConfig{};
  }
  return TreeParams{};
}

namespace {

std::string_view criterion_name(SplitCriterion c) { return c == SplitCriterion::Gini ? "gini" : "entropy"; }

SplitCriterion parse_criterion(const std::string& s) {
  if (s == "gini") return SplitCriterion::Gini;
  if (s == "entropy") return SplitCriterion::Entropy;
  throw InvalidArgument("criterion must be gini or entropy, got '" + s + "'");
}

// Reads known keys from a JSON object and rejects everything else.
class KeyReader {
 public:
  explicit KeyReader(const nlohmann::json& j) : j_(j) {
    if (!j.is_object()) throw InvalidArgument("hyperparameters must be a JSON object");
  }
  template <class T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw InvalidArgument(std::string("hyperparameter '") + key + "' has the wrong type");
    }
  }
  void mark(const char* key) { seen_.insert(key); }
  void finish(std::string_view family) const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) {
        throw InvalidArgument("unknown " + std::string(family) + " hyperparameter '" + k + "'");
      }
    }
  }

 private:
  const nlohmann::json& j_;
  std::set<std::string> seen_;
};

}  // namespace

nlohmann::json hyperparams_to_json(const HyperParams& params) {
  if (const auto* p = std::get_if<TreeParams>(&params)) {
    return {{"max_depth", p->max_depth},
            {"min_samples_split", p->min_samples_split},
            {"min_samples_leaf", p->min_samples_leaf},
            {"criterion", criterion_name(p->criterion)}};
  }
  if (const auto* p = std::get_if<ForestParams>(&params)) {
    return {{"n_estimators", p->n_estimators},
            {"max_depth", p->max_depth},
            {"min_samples_split", p->min_samples_split},
            {"min_samples_leaf", p->min_samples_leaf},
            {"criterion", criterion_name(p->criterion)},
            {"max_features", p->max_features.to_string()},
            {"bootstrap", p->bootstrap}};
  }
  if (const auto* p = std::get_if<GbtParams>(&params)) {
    return {{"n_estimators", p->n_estimators}, {"learning_rate", p->learning_rate},
            {"max_depth", p->max_depth},       {"subsample", p->subsample},
            {"colsample", p->colsample},       {"reg_alpha", p->reg_alpha},
            {"reg_lambda", p->reg_lambda},     {"min_child_weight", p->min_child_weight}};
  }
  const auto& p = std::get<TabResNetConfig>(params);
  return {{"hidden_dim", p.hidden_dim},       {"n_blocks", p.n_blocks},
          {"use_reduction", p.use_reduction}, {"dropout_rate", p.dropout_rate},
          {"learning_rate", p.learning_rate}, {"weight_decay", p.weight_decay},
          {"batch_size", p.batch_size},       {"max_epochs", p.max_epochs},
          {"patience", p.patience},           {"lr_factor", p.lr_factor},
          {"lr_patience", p.lr_patience},     {"binary_output", p.binary_output}};
}

HyperParams hyperparams_from_json(const nlohmann::json& j, HyperParams base) {
  KeyReader r(j);
  if (auto* p = std::get_if<TreeParams>(&base)) {
    std::string crit(criterion_name(p->criterion));
    r.read("max_depth", p->max_depth);
    r.read("min_samples_split", p->min_samples_split);
    r.read("min_samples_leaf", p->min_samples_leaf);
    r.read("criterion", crit);
    p->criterion = parse_criterion(crit);
    r.finish("dt");
  } else if (auto* p = std::get_if<ForestParams>(&base)) {
    std::string crit(criterion_name(p->criterion));
    std::string mf = p->max_features.to_string();
    if (j.contains("max_features") && j.at("max_features").is_number()) {
      mf = detail::format_double(j.at("max_features").get<double>());
      r.mark("max_features");
    } else {
      r.read("max_features", mf);
    }
    r.read("n_estimators", p->n_estimators);
    r.read("max_depth", p->max_depth);
    r.read("min_samples_split", p->min_samples_split);
    r.read("min_samples_leaf", p->min_samples_leaf);
    r.read("criterion", crit);
    r.read("bootstrap", p->bootstrap);
    p->criterion = parse_criterion(crit);
    p->max_features = MaxFeatures::parse(mf);
    r.finish("rf");
  } else if (auto* p = std::get_if<GbtParams>(&base)) {
    r.read("n_estimators", p->n_estimators);
    r.read("learning_rate", p->learning_rate);
    r.read("max_depth", p->max_depth);
    r.read("subsample", p->subsample);
    r.read("colsample", p->colsample);
    r.read("reg_alpha", p->reg_alpha);
    r.read("reg_lambda", p->reg_lambda);
    r.read("min_child_weight", p->min_child_weight);
    r.finish("gbt");
  } else {
    auto& c = std::get<TabResNetConfig>(base);
    r.read("hidden_dim", c.hidden_dim);
    r.read("n_blocks", c.n_blocks);
    r.read("use_reduction", c.use_reduction);
    r.read("dropout_rate", c.dropout_rate);
    r.read("learning_rate", c.learning_rate);
    r.read("weight_decay", c.weight_decay);
    r.read("batch_size", c.batch_size);
    r.read("max_epochs", c.max_epochs);
    r.read("patience", c.patience);
    r.read("lr_factor", c.lr_factor);
    r.read("lr_patience", c.lr_patience);
    r.read("binary_output", c.binary_output);
    r.finish("tabresnet");
  }
  validate(base);
  return base;
}

void validate(const HyperParams& params) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TabResNetConfig>) {
          // shape fields are filled at fit time; check the rest with placeholders
          TabResNetConfig c = p;
          c.input_dim = std::max(c.input_dim, 1);
          c.n_classes = std::max(c.n_classes, 2);
          if (c.binary_output) c.n_classes = 2;
          c.validate();
        } else {
          p.validate();
        }
      },
      params);
}

nlohmann::json TrainedModel::to_json() const {
  nlohmann::json j = model->to_json();
  j["train_seconds"] = train_seconds;
  j["hyperparams"] = hyperparams_to_json(params);
  return j;
}

TrainedModel fit_classifier(const HyperParams& params, const Dataset& train, const Dataset* validation,
                            const ClassWeights& w, std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  TrainedModel out;
  out.family = family_of(params);
  out.params = params;

  if (const auto* p = std::get_if<TreeParams>(&params)) {
    const auto t0 = clock::now();
    auto m = std::make_shared<DecisionTree>(dt_fit(train, *p, w, seed));
    out.train_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    out.model = std::move(m);
  } else if (const auto* p = std::get_if<ForestParams>(&params)) {
    const auto t0 = clock::now();
    auto m = std::make_shared<RandomForest>(rf_fit(train, *p, w, seed));
    out.train_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    out.model = std::move(m);
  } else if (const auto* p = std::get_if<GbtParams>(&params)) {
    const auto t0 = clock::now();
    auto m = std::make_shared<GradientBoosting>(gbt_fit(train, *p, w, seed));
    out.train_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    out.model = std::move(m);
  } else {
    TabResNetConfig cfg = std::get<TabResNetConfig>(params);
    cfg.input_dim = static_cast<int>(train.n_features());
    cfg.n_classes = train.n_classes();
    cfg.seed = seed;
    if (cfg.binary_output && cfg.n_classes != 2) cfg.binary_output = false;
    Dataset fit_part;
    Dataset held_out;
    const Dataset* fit_on = &train;
    const Dataset* val = validation;
    if (val == nullptr) {
      const auto folds = stratified_folds(train.labels, train.n_classes(), 5, derive_seed(seed, 3));
      IndexList rest;
      for (std::size_t f = 1; f < folds.size(); ++f) rest.insert(rest.end(), folds[f].begin(), folds[f].end());
      std::sort(rest.begin(), rest.end());
      fit_part = train.subset(rest);
      held_out = train.subset(folds[0]);
      fit_on = &fit_part;
      val = &held_out;
    }
    const auto t0 = clock::now();
    auto m = std::make_shared<TabResNet>(tabresnet_fit(*fit_on, *val, cfg, w));
    out.train_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    out.model = std::move(m);
    cfg.input_dim = 0;
    cfg.n_classes = 0;
    out.params = cfg;
  }
  // a clock tick can be coarser than a tiny fit
  out.train_seconds = std::max(out.train_seconds, 1e-9);
  return out;
}

std::unique_ptr<Classifier> load_model_json(const nlohmann::json& j) {
  const ModelFamily family = parse_family(j.at("family").get<std::string>());
  const int k = j.at("n_classes").get<int>();
  const int d = j.at("n_features").get<int>();
  switch (family) {
    case ModelFamily::DecisionTree: {
      auto params = std::get<TreeParams>(hyperparams_from_json(j.at("params"), TreeParams{}));
      return std::make_unique<DecisionTree>(Tree::from_json(j.at("tree")), k, d, params);
    }
    case ModelFamily::RandomForest: {
      auto params = std::get<ForestParams>(hyperparams_from_json(j.at("params"), ForestParams{}));
      std::vector<Tree> trees;
      for (const auto& t : j.at("trees")) trees.push_back(Tree::from_json(t));
      return std::make_unique<RandomForest>(std::move(trees), k, d, params);
    }
    case ModelFamily::Gbt: {
      auto params = std::get<GbtParams>(hyperparams_from_json(j.at("params"), GbtParams{}));
      std::vector<std::vector<Tree>> rounds;
      for (const auto& round : j.at("rounds")) {
        std::vector<Tree> per_class;
        for (const auto& t : round) per_class.push_back(t.is_null() ? Tree{} : Tree::from_json(t));
        rounds.push_back(std::move(per_class));
      }
      return std::make_unique<GradientBoosting>(j.at("init_margin").get<std::vector<double>>(),
                                                std::move(rounds), d, params);
    }
    case ModelFamily::TabResNet:
      return std::make_unique<TabResNet>(TabResNet::from_json(j));
  }
  throw InvalidArgument("unsupported model family");
}

}  // namespace imbench
