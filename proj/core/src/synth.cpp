#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "imbench/dataset.hpp"

namespace imbench {

void SynthConfig::validate() const {
  if (n_samples == 0) throw InvalidArgument("n_samples must be positive");
  if (n_classes < 2) throw InvalidArgument("n_classes must be at least 2");
  if (n_features < 1) throw InvalidArgument("n_features must be at least 1");
  if (!(cluster_separation > 0.0)) throw InvalidArgument("cluster_separation must be positive");
  if (!class_counts.empty()) {
    if (class_counts.size() != static_cast<std::size_t>(n_classes)) {
      throw InvalidArgument("class_counts length must equal n_classes");
    }
    if (std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0}) != n_samples) {
      throw InvalidArgument("class_counts must sum to n_samples");
    }
    if (std::any_of(class_counts.begin(), class_counts.end(), [](std::size_t c) { return c == 0; })) {
      throw InvalidArgument("every class count must be at least 1");
    }
  } else {
    if (!(power_law_exponent >= 0.0)) throw InvalidArgument("power_law_exponent must be >= 0");
    if (n_samples < static_cast<std::size_t>(n_classes)) {
      throw InvalidArgument("n_samples must be at least n_classes");
    }
  }
}

std::vector<std::size_t> synth_class_counts(const SynthConfig& cfg) {
  cfg.validate();
  if (!cfg.class_counts.empty()) return cfg.class_counts;

  std::vector<double> shares(static_cast<std::size_t>(cfg.n_classes));
  for (std::size_t k = 0; k < shares.size(); ++k) {
    shares[k] = std::pow(static_cast<double>(k + 1), -cfg.power_law_exponent);
  }
  std::vector<std::size_t> counts = apportion(cfg.n_samples, shares);
  // floor empty classes at one sample, paid for by the largest class
  for (auto& c : counts) {
    if (c == 0) {
      c = 1;
      --*std::max_element(counts.begin(), counts.end());
    }
  }
  return counts;
}

double exponent_for_ratio(double imbalance_ratio, int n_classes) {
  if (!(imbalance_ratio >= 1.0) || n_classes < 2) {
    throw InvalidArgument("imbalance ratio must be >= 1 and n_classes >= 2");
  }
  return std::log(imbalance_ratio) / std::log(static_cast<double>(n_classes));
}

namespace {

// K unit directions in R^d; orthonormal when d >= K.
std::vector<Vector> cluster_directions(int n_classes, int n_features, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> dirs;
  dirs.reserve(static_cast<std::size_t>(n_classes));
  while (dirs.size() < static_cast<std::size_t>(n_classes)) {
    Vector v(n_features);
    for (int j = 0; j < n_features; ++j) v[j] = normal(rng);
    if (n_features >= n_classes) {
      // modified Gram-Schmidt against the accepted directions
      for (const Vector& u : dirs) v -= u.dot(v) * u;
    }
    const double norm = v.norm();
    if (norm < 1e-8) continue;  // redraw a (numerically) dependent vector
    dirs.push_back(v / norm);
  }
  return dirs;
}

}  // namespace

Dataset synth_generate(const SynthConfig& cfg) {
  const std::vector<std::size_t> counts = synth_class_counts(cfg);
  std::mt19937_64 rng(cfg.seed);
  const auto dirs = cluster_directions(cfg.n_classes, cfg.n_features, rng);
  std::normal_distribution<double> normal(0.0, 1.0);

  const std::size_t n = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  Dataset data;
  data.features.resize(static_cast<Eigen::Index>(n), cfg.n_features);
  data.labels.reserve(n);
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const Vector centre = cfg.cluster_separation * dirs[k];
    for (std::size_t i = 0; i < counts[k]; ++i, ++row) {
      for (int j = 0; j < cfg.n_features; ++j) data.features(row, j) = centre[j] + normal(rng);
      data.labels.push_back(static_cast<int>(k));
    }
  }
  for (int k = 0; k < cfg.n_classes; ++k) data.class_names.push_back("c" + std::to_string(k));
  for (int j = 0; j < cfg.n_features; ++j) data.feature_names.push_back("x" + std::to_string(j));
  return data;
}

}  // namespace imbench
