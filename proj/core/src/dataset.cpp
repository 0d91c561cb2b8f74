#include "imbench/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "csv_util.hpp"

namespace imbench {

namespace {

constexpr double kMinStdDev = 1e-12;

std::string_view role_name(ColumnRole role) {
  switch (role) {
    case ColumnRole::Feature: return "feature";
    case ColumnRole::Label: return "label";
    case ColumnRole::Ignore: return "ignore";
  }
  return "feature";
}

std::string_view kind_name(ColumnKind kind) {
  return kind == ColumnKind::Continuous ? "continuous" : "categorical";
}

}  // namespace

// --- ColumnSchema -------------------------------------------------------------

const ColumnSpec& ColumnSchema::label() const {
  for (const auto& c : columns) {
    if (c.role == ColumnRole::Label) return c;
  }
  throw InvalidArgument("schema has no label column");
}

const ColumnSpec* ColumnSchema::find(std::string_view name) const {
  for (const auto& c : columns) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

void ColumnSchema::validate() const {
  std::size_t labels = 0;
  for (const auto& c : columns) {
    if (c.name.empty()) throw InvalidArgument("schema column with empty name");
    if (c.role == ColumnRole::Label) ++labels;
  }
  if (labels != 1) {
    throw InvalidArgument("schema must have exactly one label column, found " +
                          std::to_string(labels));
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    for (std::size_t j = i + 1; j < columns.size(); ++j) {
      if (columns[i].name == columns[j].name) {
        throw InvalidArgument("duplicate schema column '" + columns[i].name + "'");
      }
    }
  }
}

ColumnSchema ColumnSchema::parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("schema is not valid JSON: ") + e.what());
  }
  if (!doc.contains("columns") || !doc["columns"].is_array()) {
    throw InvalidArgument("schema needs a \"columns\" array");
  }
  ColumnSchema schema;
  for (const auto& entry : doc["columns"]) {
    ColumnSpec spec;
    spec.name = entry.at("name").get<std::string>();
    const std::string role = entry.value("role", "feature");
    const std::string kind = entry.value("kind", "continuous");
    if (role == "feature") spec.role = ColumnRole::Feature;
    else if (role == "label") spec.role = ColumnRole::Label;
    else if (role == "ignore") spec.role = ColumnRole::Ignore;
    else throw InvalidArgument("unknown column role '" + role + "'");
    if (kind == "continuous") spec.kind = ColumnKind::Continuous;
    else if (kind == "categorical") spec.kind = ColumnKind::Categorical;
    else throw InvalidArgument("unknown column kind '" + kind + "'");
    schema.columns.push_back(std::move(spec));
  }
  schema.validate();
  return schema;
}

ColumnSchema ColumnSchema::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string ColumnSchema::to_json() const {
  nlohmann::json doc;
  doc["columns"] = nlohmann::json::array();
  for (const auto& c : columns) {
    nlohmann::json entry = {{"name", c.name}, {"role", role_name(c.role)}};
    if (c.role == ColumnRole::Feature) entry["kind"] = kind_name(c.kind);
    doc["columns"].push_back(entry);
  }
  return doc.dump(2);
}

// --- Dataset ------------------------------------------------------------------

void Dataset::validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw DataError("feature rows (" + std::to_string(features.rows()) +
                    ") differ from label count (" + std::to_string(labels.size()) + ")");
  }
  if (feature_names.size() != n_features()) throw DataError("feature name count mismatch");
  if (class_names.size() < 2) throw DataError("dataset needs at least 2 classes");
  for (int y : labels) {
    if (y < 0 || y >= n_classes()) throw DataError("label out of range: " + std::to_string(y));
  }
  if (!features.allFinite()) throw DataError("non-finite feature value");
}

Dataset Dataset::subset(const IndexList& rows) const {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(labels[rows[i]]);
  }
  out.class_names = class_names;
  out.feature_names = feature_names;
  return out;
}

std::size_t RawColumn::missing_count() const {
  return static_cast<std::size_t>(std::count(missing.begin(), missing.end(), true));
}

// --- preprocessing ------------------------------------------------------------

namespace {

double median_of(std::vector<double> values) {
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

Dataset preprocess(const RawDataset& raw) {
  const std::size_t n = raw.rows();
  if (n == 0) throw DataError("dataset has no rows");
  if (raw.class_names.size() < 2) throw DataError("dataset needs at least 2 classes");

  std::vector<std::vector<double>> encoded;
  std::vector<std::string> names;

  for (const RawColumn& col : raw.columns) {
    const std::size_t missing = col.missing_count();
    if (2 * missing > n) continue;  // more than half missing

    if (col.kind == ColumnKind::Continuous) {
      std::vector<double> observed;
      observed.reserve(n - missing);
      for (std::size_t i = 0; i < n; ++i) {
        if (!col.missing[i]) observed.push_back(col.numeric[i]);
      }
      const double fill = median_of(observed);
      std::vector<double> values(n);
      for (std::size_t i = 0; i < n; ++i) values[i] = col.missing[i] ? fill : col.numeric[i];

      const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
      const double denom = std::max(sd, kMinStdDev);
      for (double& v : values) v = (v - mean) / denom;
      encoded.push_back(std::move(values));
      names.push_back(col.name);
    } else {
      std::vector<std::string> categories;
      std::unordered_map<std::string, std::size_t> index;
      std::vector<std::size_t> counts;
      for (std::size_t i = 0; i < n; ++i) {
        if (col.missing[i]) continue;
        auto [it, inserted] = index.try_emplace(col.categorical[i], categories.size());
        if (inserted) {
          categories.push_back(col.categorical[i]);
          counts.push_back(0);
        }
        ++counts[it->second];
      }
      // mode; ties resolved towards the earliest category
      const std::size_t mode = static_cast<std::size_t>(
          std::max_element(counts.begin(), counts.end()) - counts.begin());
      std::vector<std::vector<double>> indicators(categories.size(), std::vector<double>(n, 0.0));
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = col.missing[i] ? mode : index.at(col.categorical[i]);
        indicators[c][i] = 1.0;
      }
      for (std::size_t c = 0; c < categories.size(); ++c) {
        encoded.push_back(std::move(indicators[c]));
        names.push_back(col.name + "=" + categories[c]);
      }
    }
  }

  if (encoded.empty()) throw DataError("no usable features");

  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(encoded.size()));
  for (std::size_t j = 0; j < encoded.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      out.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = encoded[j][i];
    }
  }
  out.labels = raw.labels;
  out.class_names = raw.class_names;
  out.feature_names = std::move(names);
  return out;
}

RawDataset to_raw(const Dataset& data, std::string_view label_name) {
  RawDataset raw;
  raw.labels = data.labels;
  raw.class_names = data.class_names;
  raw.label_name = std::string(label_name);
  const std::size_t n = data.rows();
  const std::size_t d = data.n_features();

  auto group_of = [&](std::size_t j) -> std::string {
    const auto pos = data.feature_names[j].find('=');
    return pos == std::string::npos ? std::string() : data.feature_names[j].substr(0, pos);
  };
  auto is_indicator = [&](std::size_t j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v != 0.0 && v != 1.0) return false;
    }
    return true;
  };

  std::size_t j = 0;
  while (j < d) {
    const std::string group = group_of(j);
    std::size_t end = j;
    if (!group.empty()) {
      while (end < d && group_of(end) == group && is_indicator(end)) ++end;
    }
    bool one_hot = end > j;
    if (one_hot) {
      for (std::size_t i = 0; i < n && one_hot; ++i) {
        double sum = 0.0;
        for (std::size_t k = j; k < end; ++k) {
          sum += data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
        }
        one_hot = sum == 1.0;
      }
    }
    if (one_hot) {
      RawColumn col;
      col.name = group;
      col.kind = ColumnKind::Categorical;
      col.missing.assign(n, false);
      col.categorical.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = j; k < end; ++k) {
          if (data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) == 1.0) {
            col.categorical[i] = data.feature_names[k].substr(group.size() + 1);
          }
        }
      }
      raw.columns.push_back(std::move(col));
      j = end;
    } else {
      RawColumn col;
      col.name = data.feature_names[j];
      col.kind = ColumnKind::Continuous;
      col.missing.assign(n, false);
      col.numeric.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        col.numeric[i] = data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
      raw.columns.push_back(std::move(col));
      ++j;
    }
  }
  return raw;
}

void write_csv(const Dataset& data, std::ostream& out, std::string_view label_name) {
  for (const auto& name : data.feature_names) out << detail::quote_csv_field(name) << ',';
  out << detail::quote_csv_field(label_name) << '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.n_features(); ++j) {
      out << detail::format_double(
                 data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))
          << ',';
    }
    out << detail::quote_csv_field(data.class_names[static_cast<std::size_t>(data.labels[i])]) << '\n';
  }
}

void write_csv(const Dataset& data, const std::filesystem::path& path, std::string_view label_name) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write CSV file '" + path.string() + "'");
  write_csv(data, out, label_name);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

ColumnSchema schema_for(const Dataset& data, std::string_view label_name) {
  ColumnSchema schema;
  for (const auto& name : data.feature_names) {
    schema.columns.push_back({name, ColumnRole::Feature, ColumnKind::Continuous});
  }
  schema.columns.push_back({std::string(label_name), ColumnRole::Label, ColumnKind::Categorical});
  return schema;
}

// --- splitting and filtering ----------------------------------------------------

std::vector<std::size_t> class_counts(const Labels& labels, int n_classes) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes), 0);
  for (int y : labels) {
    if (y < 0 || y >= n_classes) throw DataError("label out of range: " + std::to_string(y));
    ++counts[static_cast<std::size_t>(y)];
  }
  return counts;
}

std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& shares) {
  const double sum = std::accumulate(shares.begin(), shares.end(), 0.0);
  if (shares.empty() || !(sum > 0.0)) throw InvalidArgument("apportion needs positive shares");
  std::vector<std::size_t> out(shares.size());
  std::vector<double> remainder(shares.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    const double exact = static_cast<double>(total) * shares[i] / sum;
    out[i] = static_cast<std::size_t>(std::floor(exact));
    remainder[i] = exact - std::floor(exact);
    assigned += out[i];
  }
  std::vector<std::size_t> order(shares.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++out[order[k % order.size()]];
  return out;
}

SplitIndices stratified_split(const Labels& labels, int n_classes, const SplitFractions& fractions,
                              std::uint64_t seed) {
  const std::vector<double> shares{fractions.train, fractions.validation, fractions.test};
  for (double s : shares) {
    if (!(s > 0.0)) throw InvalidArgument("split fractions must be positive");
  }
  if (std::abs(shares[0] + shares[1] + shares[2] - 1.0) > 1e-9) {
    throw InvalidArgument("split fractions must sum to 1");
  }

  std::vector<IndexList> by_class(static_cast<std::size_t>(n_classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class.at(static_cast<std::size_t>(labels[i])).push_back(i);
  }

  std::mt19937_64 rng(seed);
  SplitIndices split;
  std::array<IndexList*, 3> parts{&split.train, &split.validation, &split.test};
  for (std::size_t k = 0; k < by_class.size(); ++k) {
    IndexList& members = by_class[k];
    if (members.empty()) continue;
    if (members.size() < 3) {
      throw DataError("class " + std::to_string(k) + " has " + std::to_string(members.size()) +
                      " samples; stratified splitting needs at least 3");
    }
    std::shuffle(members.begin(), members.end(), rng);

    std::vector<std::size_t> sizes = apportion(members.size(), shares);
    for (std::size_t s = 0; s < 3; ++s) {
      if (sizes[s] > 0) continue;
      // borrow from the most over-allocated split
      std::size_t donor = 3;
      double best_excess = -1e300;
      for (std::size_t t = 0; t < 3; ++t) {
        if (sizes[t] < 2) continue;
        const double excess = static_cast<double>(sizes[t]) -
                              shares[t] * static_cast<double>(members.size());
        if (excess > best_excess) {
          best_excess = excess;
          donor = t;
        }
      }
      --sizes[donor];
      ++sizes[s];
    }

    std::size_t offset = 0;
    for (std::size_t s = 0; s < 3; ++s) {
      parts[s]->insert(parts[s]->end(), members.begin() + static_cast<std::ptrdiff_t>(offset),
                       members.begin() + static_cast<std::ptrdiff_t>(offset + sizes[s]));
      offset += sizes[s];
    }
  }
  for (IndexList* part : parts) std::sort(part->begin(), part->end());
  return split;
}

SplitIndices stratified_split(const Dataset& data, const SplitFractions& fractions,
                              std::uint64_t seed) {
  return stratified_split(data.labels, data.n_classes(), fractions, seed);
}

std::vector<IndexList> stratified_folds(const Labels& labels, int n_classes, int folds,
                                        std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("need at least 2 folds");
  std::vector<IndexList> by_class(static_cast<std::size_t>(n_classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class.at(static_cast<std::size_t>(labels[i])).push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::vector<IndexList> out(static_cast<std::size_t>(folds));
  std::size_t next = 0;
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t i : members) {
      out[next % out.size()].push_back(i);
      ++next;
    }
  }
  for (auto& fold : out) std::sort(fold.begin(), fold.end());
  return out;
}

Dataset filter_min_class_count(const Dataset& data, std::size_t min_count) {
  if (min_count < 1) throw InvalidArgument("min_count must be at least 1");
  const auto counts = class_counts(data.labels, data.n_classes());
  std::vector<int> remap(counts.size(), -1);
  Dataset out;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] >= min_count) {
      remap[k] = static_cast<int>(out.class_names.size());
      out.class_names.push_back(data.class_names[k]);
    }
  }
  if (out.class_names.size() < 2) {
    throw DataError("degenerate after filtering: " + std::to_string(out.class_names.size()) +
                    " class(es) have at least " + std::to_string(min_count) + " samples");
  }
  IndexList keep;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    if (remap[static_cast<std::size_t>(data.labels[i])] >= 0) keep.push_back(i);
  }
  Dataset kept = data.subset(keep);
  for (int& y : kept.labels) y = remap[static_cast<std::size_t>(y)];
  kept.class_names = std::move(out.class_names);
  return kept;
}

}  // namespace imbench
