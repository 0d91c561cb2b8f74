#pragma once

#include <cstdint>
#include <memory>
#include <variant>

#include "imbench/classifier.hpp"
#include "imbench/dataset.hpp"
#include "imbench/forest.hpp"
#include "imbench/gbt.hpp"
#include "imbench/tabresnet.hpp"
#include "imbench/tree.hpp"
#include "imbench/weighting.hpp"

namespace imbench {

/// Hyperparameters of one family. For TabResNet the input and class counts
/// are taken from the data and the seed from the fit call.
using HyperParams = std::variant<TreeParams, ForestParams, GbtParams, TabResNetConfig>;

ModelFamily family_of(const HyperParams& params);
HyperParams default_hyperparams(ModelFamily family);

/// Flat JSON object with one key per field.
nlohmann::json hyperparams_to_json(const HyperParams& params);
/// Applies the keys of `j` on top of `base`; unknown keys are an error.
HyperParams hyperparams_from_json(const nlohmann::json& j, HyperParams base);
void validate(const HyperParams& params);

struct TrainedModel {
  std::shared_ptr<const Classifier> model;
  ModelFamily family = ModelFamily::DecisionTree;
  HyperParams params;
  double train_seconds = 0.0;

  Matrix predict_proba(const Matrix& features) const { return model->predict_proba(features); }
  Labels predict(const Matrix& features) const { return model->predict(features); }
  nlohmann::json to_json() const;
};

/// Fits the family selected by `params`, timing the fit alone. TabResNet uses
/// `validation` for early stopping; without one it holds out a stratified
/// fifth of `train`.
TrainedModel fit_classifier(const HyperParams& params, const Dataset& train, const Dataset* validation,
                            const ClassWeights& w, std::uint64_t seed);

/// Rebuilds a classifier from the JSON written by TrainedModel::to_json or
/// Classifier::to_json.
std::unique_ptr<Classifier> load_model_json(const nlohmann::json& j);

}  // namespace imbench
