#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "imbench/model.hpp"

namespace imbench {

struct HpoSpec {
  int n_trials = 25;
  int cv_folds = 5;
  // median pruning only starts once this many trials have completed
  int startup_trials = 5;
  WeightingStrategy weighting = WeightingStrategy::None;
  double beta = kDefaultEffectiveBeta;

  void validate() const;
};

/// One draw from the search space of a family. Integer and categorical ranges
/// are uniform; learning rates and weight decay are log-uniform.
HyperParams sample_hyperparams(ModelFamily family, int input_dim, std::mt19937_64& rng);

struct Trial {
  enum class Status { Complete, Pruned, Failed };

  int index = 0;
  HyperParams params;
  std::vector<double> fold_scores;  // validation weighted F1 per completed fold
  double mean_score = 0.0;
  Status status = Status::Complete;
  std::string error;
};

struct HpoResult {
  HyperParams best;
  int best_trial = -1;
  double best_score = 0.0;
  std::vector<Trial> trials;
};

/// Seeded random search scored by mean weighted F1 over stratified folds.
/// A trial stops early when its running mean after f folds is below the
/// median running mean of the completed trials after f folds. Ties for the
/// best score go to the earliest trial. Throws when no trial completes.
HpoResult hpo_random_search(ModelFamily family, const HpoSpec& spec, const Dataset& data,
                            std::uint64_t seed);

std::string_view to_string(Trial::Status status);

}  // namespace imbench
