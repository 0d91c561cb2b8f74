#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "imbench/harness.hpp"

namespace imbench {

std::string ClassifierId::name() const {
  return std::string(to_string(family)) + "-" + std::string(to_string(weighting));
}

ClassifierId ClassifierId::parse(std::string_view name) {
  const auto dash = name.find('-');
  if (dash == std::string_view::npos) {
    throw InvalidArgument("classifier id must look like family-weighting, got '" + std::string(name) + "'");
  }
  return {parse_family(name.substr(0, dash)), parse_weighting(name.substr(dash + 1))};
}

void ExperimentConfig::validate() const {
  if (targets.empty()) throw InvalidArgument("config needs at least one target");
  std::set<std::string> names;
  for (const auto& t : targets) {
    if (t.name.empty()) throw InvalidArgument("every target needs a name");
    if (!names.insert(t.name).second) throw InvalidArgument("duplicate target name '" + t.name + "'");
    if (t.synth) {
      t.synth->validate();
    } else if (t.csv.empty()) {
      throw InvalidArgument("target '" + t.name + "' needs either csv or synth");
    } else if (t.schema.empty() && t.label.empty()) {
      throw InvalidArgument("target '" + t.name + "' needs a schema file or a label column");
    }
  }
  if (!std::is_sorted(filter_thresholds.begin(), filter_thresholds.end()) ||
      std::adjacent_find(filter_thresholds.begin(), filter_thresholds.end()) != filter_thresholds.end()) {
    throw InvalidArgument("filter_thresholds must be strictly ascending");
  }
  if (std::find(filter_thresholds.begin(), filter_thresholds.end(), std::size_t{0}) != filter_thresholds.end()) {
    throw InvalidArgument("filter thresholds must be at least 1");
  }
  if (weightings.empty()) throw InvalidArgument("config needs at least one weighting strategy");
  if (families.empty()) throw InvalidArgument("config needs at least one model family");
  if (n_runs < 1) throw InvalidArgument("n_runs must be at least 1");
  if (workers < 1) throw InvalidArgument("workers must be at least 1");
  if (!(split.train > 0 && split.validation > 0 && split.test > 0) ||
      std::abs(split.train + split.validation + split.test - 1.0) > 1e-9) {
    throw InvalidArgument("split fractions must be positive and sum to 1");
  }
  if (!(beta >= 0.0 && beta < 1.0)) throw InvalidArgument("beta must lie in [0, 1)");
  for (const auto& [name, o] : classifier_overrides) {
    ClassifierId::parse(name);
    if (o.beta && !(*o.beta >= 0.0 && *o.beta < 1.0)) {
      throw InvalidArgument("override beta for '" + name + "' must lie in [0, 1)");
    }
  }
  if (hpo.enabled) HpoSpec{hpo.n_trials, hpo.cv_folds}.validate();
}

std::vector<ClassifierId> ExperimentConfig::classifiers() const {
  std::vector<ClassifierId> out;
  for (auto f : families) {
    for (auto w : weightings) out.push_back({f, w});
  }
  return out;
}

HyperParams ExperimentConfig::params_for(const ClassifierId& id) const {
  HyperParams p = default_hyperparams(id.family);
  if (auto it = hyperparams.find(id.family); it != hyperparams.end()) p = it->second;
  if (auto it = classifier_overrides.find(id.name());
      it != classifier_overrides.end() && !it->second.hyperparams.is_null()) {
    p = hyperparams_from_json(it->second.hyperparams, p);
  }
  return p;
}

double ExperimentConfig::beta_for(const ClassifierId& id) const {
  if (auto it = classifier_overrides.find(id.name()); it != classifier_overrides.end() && it->second.beta) {
    return *it->second.beta;
  }
  return beta;
}

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, std::string_view where) {
  if (!j.is_object()) throw InvalidArgument(std::string(where) + " must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw InvalidArgument("unknown key '" + k + "' in " + std::string(where));
    }
  }
}

template <class T>
void get_if_present(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

SynthConfig parse_synth(const json& j) {
  reject_unknown(j,
                 {"n_samples", "n_classes", "n_features", "class_counts", "power_law_exponent",
                  "imbalance_ratio", "cluster_separation", "seed"},
                 "synth");
  SynthConfig c;
  get_if_present(j, "n_samples", c.n_samples);
  get_if_present(j, "n_classes", c.n_classes);
  get_if_present(j, "n_features", c.n_features);
  get_if_present(j, "class_counts", c.class_counts);
  get_if_present(j, "power_law_exponent", c.power_law_exponent);
  get_if_present(j, "cluster_separation", c.cluster_separation);
  get_if_present(j, "seed", c.seed);
  if (j.contains("imbalance_ratio")) {
    if (j.contains("power_law_exponent")) {
      throw InvalidArgument("synth: give power_law_exponent or imbalance_ratio, not both");
    }
    c.power_law_exponent = exponent_for_ratio(j.at("imbalance_ratio").get<double>(), c.n_classes);
  }
  if (!c.class_counts.empty() && c.n_samples == SynthConfig{}.n_samples && !j.contains("n_samples")) {
    c.n_samples = 0;
    for (auto n : c.class_counts) c.n_samples += n;
  }
  return c;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::string_view json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    reject_unknown(j,
                   {"targets", "filter_thresholds", "weightings", "families", "n_runs", "base_seed", "split",
                    "beta", "workers", "sequential_timing", "hyperparams", "classifier_overrides", "hpo"},
                   "config");
    for (const auto& t : j.at("targets")) {
      reject_unknown(t, {"name", "csv", "schema", "label", "synth"}, "target");
      TargetSpec spec;
      spec.name = t.at("name").get<std::string>();
      if (t.contains("csv")) spec.csv = resolve(base_dir, t.at("csv").get<std::string>());
      if (t.contains("schema")) spec.schema = resolve(base_dir, t.at("schema").get<std::string>());
      get_if_present(t, "label", spec.label);
      if (t.contains("synth")) spec.synth = parse_synth(t.at("synth"));
      cfg.targets.push_back(std::move(spec));
    }
    get_if_present(j, "filter_thresholds", cfg.filter_thresholds);
    if (j.contains("weightings")) {
      cfg.weightings.clear();
      for (const auto& w : j.at("weightings")) cfg.weightings.push_back(parse_weighting(w.get<std::string>()));
    }
    if (j.contains("families")) {
      cfg.families.clear();
      for (const auto& f : j.at("families")) cfg.families.push_back(parse_family(f.get<std::string>()));
    }
    get_if_present(j, "n_runs", cfg.n_runs);
    get_if_present(j, "base_seed", cfg.base_seed);
    if (j.contains("split")) {
      const auto& s = j.at("split");
      reject_unknown(s, {"train", "validation", "test"}, "split");
      get_if_present(s, "train", cfg.split.train);
      get_if_present(s, "validation", cfg.split.validation);
      get_if_present(s, "test", cfg.split.test);
    }
    get_if_present(j, "beta", cfg.beta);
    get_if_present(j, "workers", cfg.workers);
    get_if_present(j, "sequential_timing", cfg.sequential_timing);
    if (j.contains("hyperparams")) {
      for (const auto& [family, params] : j.at("hyperparams").items()) {
        const ModelFamily f = parse_family(family);
        cfg.hyperparams[f] = hyperparams_from_json(params, default_hyperparams(f));
      }
    }
    if (j.contains("classifier_overrides")) {
      for (const auto& [name, o] : j.at("classifier_overrides").items()) {
        reject_unknown(o, {"beta", "hyperparams"}, "classifier override '" + name + "'");
        ClassifierOverride co;
        if (o.contains("beta")) co.beta = o.at("beta").get<double>();
        if (o.contains("hyperparams")) co.hyperparams = o.at("hyperparams");
        cfg.classifier_overrides[name] = std::move(co);
      }
    }
    if (j.contains("hpo")) {
      const auto& h = j.at("hpo");
      reject_unknown(h, {"enabled", "n_trials", "cv_folds", "retune_per_threshold", "seed"}, "hpo");
      get_if_present(h, "enabled", cfg.hpo.enabled);
      get_if_present(h, "n_trials", cfg.hpo.n_trials);
      get_if_present(h, "cv_folds", cfg.hpo.cv_folds);
      get_if_present(h, "retune_per_threshold", cfg.hpo.retune_per_threshold);
      get_if_present(h, "seed", cfg.hpo.seed);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  cfg.validate();
  for (const auto& [name, o] : cfg.classifier_overrides) {
    if (!o.hyperparams.is_null()) cfg.params_for(ClassifierId::parse(name));  // surface errors early
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse(ss.str(), path.parent_path());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

Dataset load_target(const TargetSpec& target) {
  if (target.synth) return synth_generate(*target.synth);
  const ColumnSchema schema =
      target.schema.empty() ? ColumnSchema::infer(target.csv, target.label) : ColumnSchema::load(target.schema);
  return preprocess(load_csv(target.csv, schema));
}

std::vector<std::size_t> default_threshold_ladder(const Dataset& data) {
  auto counts = class_counts(data.labels, data.n_classes());
  std::sort(counts.rbegin(), counts.rend());
  const std::size_t viable = counts.size() >= 2 ? counts[1] : 0;
  std::vector<std::size_t> ladder;
  for (std::size_t scale = 1;; scale *= 10) {
    for (std::size_t m : {1, 2, 5}) {
      const std::size_t t = m * scale;
      if (t > viable) return ladder;
      ladder.push_back(t);
    }
  }
}

}  // namespace imbench
