#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imbench/types.hpp"

namespace imbench {

enum class ColumnRole { Feature, Label, Ignore };
enum class ColumnKind { Continuous, Categorical };

struct ColumnSpec {
  std::string name;
  ColumnRole role = ColumnRole::Feature;
  ColumnKind kind = ColumnKind::Continuous;
};

/// Role and kind of every raw CSV column. Exactly one column is the label.
///
/// On disk the schema is JSON:
///
///     {"columns": [
///        {"name": "age",    "role": "feature", "kind": "continuous"},
///        {"name": "sex",    "role": "feature", "kind": "categorical"},
///        {"name": "stay_id","role": "ignore"},
///        {"name": "outcome","role": "label"}
///     ]}
///
/// `role` defaults to "feature" and `kind` to "continuous".
struct ColumnSchema {
  std::vector<ColumnSpec> columns;

  const ColumnSpec& label() const;
  const ColumnSpec* find(std::string_view name) const;
  void validate() const;

  static ColumnSchema parse(std::string_view json_text);
  static ColumnSchema load(const std::filesystem::path& path);
  std::string to_json() const;

  /// Builds a schema from a CSV header: `label` becomes the label column and
  /// every other column is a feature whose kind is inferred from the first
  /// rows (all non-missing cells numeric => continuous).
  static ColumnSchema infer(const std::filesystem::path& csv_path, std::string_view label,
                            std::size_t probe_rows = 1000);
};

/// Encoded, model-ready dataset.
struct Dataset {
  Matrix features;                          // N x d
  Labels labels;                            // N, values in [0, K)
  std::vector<std::string> class_names;     // K
  std::vector<std::string> feature_names;   // d

  std::size_t rows() const { return labels.size(); }
  std::size_t n_features() const { return static_cast<std::size_t>(features.cols()); }
  int n_classes() const { return static_cast<int>(class_names.size()); }

  /// Throws DataError when an invariant is broken.
  void validate() const;

  Dataset subset(const IndexList& rows) const;
};

/// One raw column before imputation and encoding.
struct RawColumn {
  std::string name;
  ColumnKind kind = ColumnKind::Continuous;
  std::vector<double> numeric;          // continuous; NaN marks a missing cell
  std::vector<std::string> categorical; // categorical; "" marks a missing cell
  std::vector<bool> missing;

  std::size_t missing_count() const;
};

/// Parsed CSV content: feature columns plus densified labels.
struct RawDataset {
  std::vector<RawColumn> columns;
  Labels labels;
  std::vector<std::string> class_names;
  std::string label_name;
  std::size_t skipped_unlabelled = 0;

  std::size_t rows() const { return labels.size(); }
};

/// Cells that are empty or the literal "NA" are missing.
bool is_missing_cell(std::string_view cell);

RawDataset load_csv(const std::filesystem::path& path, const ColumnSchema& schema);
RawDataset parse_csv(std::istream& in, const ColumnSchema& schema);

/// Drops columns with more than half their cells missing, median-imputes and
/// z-scores continuous columns, mode-imputes and one-hot encodes categorical
/// columns (one indicator named "column=value" per observed category, in
/// first-appearance order).
Dataset preprocess(const RawDataset& raw);

/// View of an encoded dataset as raw columns: one-hot groups ("col=value")
/// become categorical columns again, everything else is continuous.
RawDataset to_raw(const Dataset& data, std::string_view label_name = "label");

/// Writes features plus a trailing label column (class names) as CSV.
void write_csv(const Dataset& data, const std::filesystem::path& path,
               std::string_view label_name = "label");
void write_csv(const Dataset& data, std::ostream& out, std::string_view label_name = "label");

/// Schema describing a file produced by write_csv.
ColumnSchema schema_for(const Dataset& data, std::string_view label_name = "label");

// --- splitting and filtering -------------------------------------------------

struct SplitFractions {
  double train = 0.6;
  double validation = 0.2;
  double test = 0.2;
};

struct SplitIndices {
  IndexList train;
  IndexList validation;
  IndexList test;
};

/// Per-class shuffle followed by contiguous slicing; per-class split sizes
/// come from largest-remainder rounding and every split receives at least one
/// sample of every class.
SplitIndices stratified_split(const Labels& labels, int n_classes, const SplitFractions& fractions,
                              std::uint64_t seed);
SplitIndices stratified_split(const Dataset& data, const SplitFractions& fractions,
                              std::uint64_t seed);

/// Assigns every row to one of `folds` folds, class by class.
std::vector<IndexList> stratified_folds(const Labels& labels, int n_classes, int folds,
                                        std::uint64_t seed);

/// Removes every class with fewer than `min_count` samples and re-densifies
/// the surviving labels in their original order.
Dataset filter_min_class_count(const Dataset& data, std::size_t min_count);

/// Per-class sample counts (length K, zeros included).
std::vector<std::size_t> class_counts(const Labels& labels, int n_classes);

/// Apportions `total` proportionally to `shares` with largest-remainder
/// rounding. Ties go to the lower index.
std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& shares);

// --- synthetic data ----------------------------------------------------------

struct SynthConfig {
  std::size_t n_samples = 1000;
  int n_classes = 2;
  int n_features = 2;
  std::vector<std::size_t> class_counts;  // explicit counts; empty => power law
  double power_law_exponent = 0.0;
  double cluster_separation = 3.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Class counts the generator will use: explicit counts, or
/// n_k proportional to (k+1)^-gamma rounded to n_samples with every class >= 1.
std::vector<std::size_t> synth_class_counts(const SynthConfig& cfg);

/// Power-law exponent whose unrounded profile over K classes has the given
/// imbalance ratio.
double exponent_for_ratio(double imbalance_ratio, int n_classes);

/// Isotropic unit-variance Gaussian cluster per class, centred at
/// `cluster_separation` along a class-specific random direction.
Dataset synth_generate(const SynthConfig& cfg);

}  // namespace imbench
