#include "imbench/hpo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "imbench/eval.hpp"
#include "imbench/log.hpp"

namespace imbench {

void HpoSpec::validate() const {
  if (n_trials < 1) throw InvalidArgument("n_trials must be at least 1");
  if (cv_folds < 2) throw InvalidArgument("cv_folds must be at least 2");
  if (startup_trials < 0) throw InvalidArgument("startup_trials must be non-negative");
}

std::string_view to_string(Trial::Status status) {
  switch (status) {
    case Trial::Status::Complete: return "complete";
    case Trial::Status::Pruned: return "pruned";
    case Trial::Status::Failed: return "failed";
  }
  return "failed";
}

namespace {

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform_real(rng, std::log(lo), std::log(hi)));
}

SplitCriterion pick_criterion(std::mt19937_64& rng) {
  return uniform_int(rng, 0, 1) == 0 ? SplitCriterion::Gini : SplitCriterion::Entropy;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

HyperParams sample_hyperparams(ModelFamily family, int input_dim, std::mt19937_64& rng) {
  switch (family) {
    case ModelFamily::DecisionTree: {
      TreeParams p;
      p.max_depth = uniform_int(rng, 2, 32);
      p.min_samples_split = static_cast<std::size_t>(uniform_int(rng, 2, 50));
      p.min_samples_leaf = static_cast<std::size_t>(uniform_int(rng, 1, 20));
      p.criterion = pick_criterion(rng);
      return p;
    }
    case ModelFamily::RandomForest: {
      ForestParams p;
      p.n_estimators = uniform_int(rng, 100, 1000);
      p.max_depth = uniform_int(rng, 3, 25);
      p.min_samples_split = static_cast<std::size_t>(uniform_int(rng, 2, 50));
      p.min_samples_leaf = static_cast<std::size_t>(uniform_int(rng, 1, 20));
      p.criterion = pick_criterion(rng);
      switch (uniform_int(rng, 0, 2)) {
        case 0: p.max_features = {MaxFeatures::Rule::Sqrt, 1.0}; break;
        case 1: p.max_features = {MaxFeatures::Rule::Log2, 1.0}; break;
        default: p.max_features = {MaxFeatures::Rule::Fraction, uniform_real(rng, 0.1, 1.0)}; break;
      }
      return p;
    }
    case ModelFamily::Gbt: {
      GbtParams p;
      p.n_estimators = uniform_int(rng, 200, 1200);
      p.learning_rate = log_uniform(rng, 0.01, 0.3);
      p.max_depth = uniform_int(rng, 3, 12);
      p.subsample = uniform_real(rng, 0.6, 1.0);
      p.colsample = uniform_real(rng, 0.5, 1.0);
      p.reg_alpha = uniform_real(rng, 0.0, 5.0);
      p.reg_lambda = uniform_real(rng, 0.0, 5.0);
      return p;
    }
    case ModelFamily::TabResNet: {
      TabResNetConfig c;
      const int lo = std::max(1, (input_dim + 1) / 2);
      const int hi = std::max(lo, 2 * input_dim);
      c.hidden_dim = clamp_hidden_dim(uniform_int(rng, lo, hi), input_dim);
      c.n_blocks = uniform_int(rng, 1, 3);
      c.use_reduction = uniform_int(rng, 0, 1) == 1;
      c.dropout_rate = uniform_real(rng, 0.0, 0.5);
      c.learning_rate = log_uniform(rng, 1e-6, 1e-1);
      c.weight_decay = log_uniform(rng, 1e-7, 1e-2);
      c.batch_size = static_cast<int>(std::lround(log_uniform(rng, 32.0, 1024.0)));
      return c;
    }
  }
  throw InvalidArgument("unknown model family");
}

HpoResult hpo_random_search(ModelFamily family, const HpoSpec& spec, const Dataset& data,
                            std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  const auto folds = stratified_folds(data.labels, data.n_classes(), spec.cv_folds, seed);

  // per fold: (fit part, held-out part)
  std::vector<std::pair<Dataset, Dataset>> parts;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    IndexList rest;
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g != f) rest.insert(rest.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(rest.begin(), rest.end());
    parts.emplace_back(data.subset(rest), data.subset(folds[f]));
  }

  HpoResult result;
  for (int t = 0; t < spec.n_trials; ++t) {
    Trial trial;
    trial.index = t;
    trial.params = sample_hyperparams(family, static_cast<int>(data.n_features()), rng);
    try {
      double running = 0.0;
      for (std::size_t f = 0; f < parts.size(); ++f) {
        const auto& [fit_part, held_out] = parts[f];
        const auto dist = LabelDistribution::of(fit_part.labels, fit_part.n_classes());
        const auto w = compute_weights(spec.weighting, dist, spec.beta);
        const auto model = fit_classifier(trial.params, fit_part, &held_out, w, seed + f);
        const Labels pred = model.predict(held_out.features);
        const double score =
            f1_scores(confusion(held_out.labels, pred, held_out.n_classes())).weighted_f1;
        trial.fold_scores.push_back(score);
        running += score;
        const double mean_so_far = running / static_cast<double>(f + 1);

        std::vector<double> peers;
        for (const auto& done : result.trials) {
          if (done.status != Trial::Status::Complete) continue;
          double s = 0.0;
          for (std::size_t g = 0; g <= f; ++g) s += done.fold_scores[g];
          peers.push_back(s / static_cast<double>(f + 1));
        }
        if (f + 1 < parts.size() && static_cast<int>(peers.size()) >= std::max(1, spec.startup_trials) &&
            mean_so_far < median(peers)) {
          trial.status = Trial::Status::Pruned;
          break;
        }
      }
      trial.mean_score = running / static_cast<double>(trial.fold_scores.size());
    } catch (const std::exception& e) {
      trial.status = Trial::Status::Failed;
      trial.error = e.what();
      log::warn("hpo trial " + std::to_string(t) + " failed: " + trial.error);
    }
    if (trial.status == Trial::Status::Complete &&
        (result.best_trial < 0 || trial.mean_score > result.best_score)) {
      result.best_trial = t;
      result.best_score = trial.mean_score;
      result.best = trial.params;
    }
    result.trials.push_back(std::move(trial));
  }
  if (result.best_trial < 0) {
    std::ostringstream msg;
    msg << "hyperparameter search for " << to_string(family) << " produced no complete trial:";
    for (const auto& t : result.trials) {
      msg << " [" << t.index << ' ' << to_string(t.status) << (t.error.empty() ? "" : ": " + t.error) << ']';
    }
    throw Error(msg.str());
  }
  return result;
}

}  // namespace imbench
