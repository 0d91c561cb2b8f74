#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "imbench/imbalance.hpp"
#include "imbench/rank_stats.hpp"

namespace imbench {

/// One classifier evaluated on one (target, filter threshold) block for one
/// run seed.
struct BlockResult {
  std::string classifier;  // family-weighting, e.g. "gbt-effective"
  std::string target;
  std::size_t filter_threshold = 0;
  std::uint64_t seed = 0;
  std::size_t n_train = 0;
  int n_classes = 0;
  ImbalanceReport imbalance;  // of the filtered training labels
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
  double train_seconds = 0.0;
  std::string status = "ok";  // ok | skipped | failed
  std::string reason;

  bool ok() const { return status == "ok"; }
  bool operator==(const BlockResult&) const = default;
};

/// Sort key: target, threshold, classifier, seed.
bool block_key_less(const BlockResult& a, const BlockResult& b);

inline constexpr const char* kResultColumns[] = {
    "classifier", "target",   "filter_threshold", "seed",        "n_train",
    "n_classes",  "cvcf",     "ir",               "necd",        "accuracy",
    "macro_f1",   "weighted_f1", "train_seconds", "status",      "reason"};

void write_results(const std::vector<BlockResult>& rows, std::ostream& out);
void write_results(const std::vector<BlockResult>& rows, const std::filesystem::path& path);
std::vector<BlockResult> read_results(std::istream& in);
std::vector<BlockResult> read_results(const std::filesystem::path& path);

/// Mean and sample standard deviation over the runs of one
/// (classifier, target, threshold) cell; only rows with status ok count.
struct SummaryRow {
  std::string classifier;
  std::string target;
  std::size_t filter_threshold = 0;
  std::size_t n_runs = 0;
  double n_train_mean = 0.0;
  double cvcf_mean = 0.0, ir_mean = 0.0, necd_mean = 0.0;
  double accuracy_mean = 0.0, accuracy_std = 0.0;
  double macro_f1_mean = 0.0, macro_f1_std = 0.0;
  double weighted_f1_mean = 0.0, weighted_f1_std = 0.0;
  double train_seconds_mean = 0.0, train_seconds_std = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<BlockResult>& rows);
void write_summary(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);
void write_summary(const std::vector<SummaryRow>& rows, std::ostream& out);

/// Metric against the imbalance measures, one row per classifier, target and
/// threshold, ordered by increasing ir within each classifier and target.
void write_degradation(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);
void write_degradation(const std::vector<SummaryRow>& rows, std::ostream& out);

enum class Metric { Accuracy, MacroF1, WeightedF1, TrainSeconds };
Metric parse_metric(std::string_view name);
/// Ranking direction that matches the metric (time is minimised).
Direction natural_direction(Metric metric);

/// Classifier-by-block matrix of the run-averaged metric. Blocks are
/// (target, threshold) pairs; blocks missing any classifier are dropped and
/// their names returned in `dropped` when given.
BlockMatrix pivot_results(const std::vector<BlockResult>& rows, Metric metric,
                          std::vector<std::string>* dropped = nullptr);

}  // namespace imbench
