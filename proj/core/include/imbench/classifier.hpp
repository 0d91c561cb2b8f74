#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "imbench/types.hpp"

namespace imbench {

enum class ModelFamily { DecisionTree, RandomForest, Gbt, TabResNet };

inline constexpr ModelFamily kAllFamilies[] = {ModelFamily::DecisionTree, ModelFamily::RandomForest,
                                               ModelFamily::Gbt, ModelFamily::TabResNet};

/// Short names: dt, rf, gbt, tabresnet.
std::string_view to_string(ModelFamily family);
ModelFamily parse_family(std::string_view name);

/// A fitted model. Implementations are immutable after fitting, so const
/// methods may be called concurrently.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual ModelFamily family() const = 0;
  virtual int n_classes() const = 0;
  virtual int n_features() const = 0;

  /// N x K class probabilities; rows sum to 1.
  virtual Matrix predict_proba(const Matrix& features) const = 0;

  virtual nlohmann::json to_json() const = 0;

  Labels predict(const Matrix& features) const;

 protected:
  void check_width(const Matrix& features) const;
};

}  // namespace imbench
