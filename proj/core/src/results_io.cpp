#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "csv_util.hpp"
#include "imbench/results.hpp"

namespace imbench {

bool block_key_less(const BlockResult& a, const BlockResult& b) {
  return std::tie(a.target, a.filter_threshold, a.classifier, a.seed) <
         std::tie(b.target, b.filter_threshold, b.classifier, b.seed);
}

namespace {

using detail::format_double;
using detail::quote_csv_field;

template <class T>
T parse_integer(const std::string& s, const char* column, std::size_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError("results line " + std::to_string(line) + ": bad " + column + " '" + s + "'");
  }
  return v;
}

double parse_real(const std::string& s, const char* column, std::size_t line) {
  if (s == "nan" || s == "NaN") return std::nan("");
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError("results line " + std::to_string(line) + ": bad " + column + " '" + s + "'");
  }
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  return f;
}

}  // namespace

void write_results(const std::vector<BlockResult>& rows, std::ostream& out) {
  for (std::size_t i = 0; i < std::size(kResultColumns); ++i) {
    out << (i ? "," : "") << kResultColumns[i];
  }
  out << '\n';
  for (const auto& r : rows) {
    out << quote_csv_field(r.classifier) << ',' << quote_csv_field(r.target) << ','
        << r.filter_threshold << ',' << r.seed << ',' << r.n_train << ',' << r.n_classes << ','
        << format_double(r.imbalance.cvcf) << ',' << format_double(r.imbalance.ir) << ','
        << format_double(r.imbalance.necd) << ',' << format_double(r.accuracy) << ','
        << format_double(r.macro_f1) << ',' << format_double(r.weighted_f1) << ','
        << format_double(r.train_seconds) << ',' << quote_csv_field(r.status) << ','
        << quote_csv_field(r.reason) << '\n';
  }
}

void write_results(const std::vector<BlockResult>& rows, const std::filesystem::path& path) {
  auto f = open_out(path);
  write_results(rows, f);
  if (!f) throw IoError("failed writing " + path.string());
}

std::vector<BlockResult> read_results(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("results file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split_csv_line(line);
  if (header.size() != std::size(kResultColumns) ||
      !std::equal(header.begin(), header.end(), std::begin(kResultColumns))) {
    throw DataError("results header does not match the expected columns");
  }
  std::vector<BlockResult> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != header.size()) {
      throw DataError("results line " + std::to_string(line_no) + " has " + std::to_string(f.size()) +
                      " fields, expected " + std::to_string(header.size()));
    }
    BlockResult r;
    r.classifier = f[0];
    r.target = f[1];
    r.filter_threshold = parse_integer<std::size_t>(f[2], "filter_threshold", line_no);
    r.seed = parse_integer<std::uint64_t>(f[3], "seed", line_no);
    r.n_train = parse_integer<std::size_t>(f[4], "n_train", line_no);
    r.n_classes = parse_integer<int>(f[5], "n_classes", line_no);
    r.imbalance.cvcf = parse_real(f[6], "cvcf", line_no);
    r.imbalance.ir = parse_real(f[7], "ir", line_no);
    r.imbalance.necd = parse_real(f[8], "necd", line_no);
    r.accuracy = parse_real(f[9], "accuracy", line_no);
    r.macro_f1 = parse_real(f[10], "macro_f1", line_no);
    r.weighted_f1 = parse_real(f[11], "weighted_f1", line_no);
    r.train_seconds = parse_real(f[12], "train_seconds", line_no);
    r.status = f[13];
    r.reason = f[14];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<BlockResult> read_results(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  try {
    return read_results(f);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd m;
  if (v.empty()) return m;
  double s = 0.0;
  for (double x : v) s += x;
  m.mean = s / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return m;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<BlockResult>& rows) {
  using Key = std::tuple<std::string, std::string, std::size_t>;
  std::map<Key, std::vector<const BlockResult*>> groups;
  for (const auto& r : rows) {
    if (r.ok()) groups[{r.classifier, r.target, r.filter_threshold}].push_back(&r);
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, members] : groups) {
    SummaryRow s;
    std::tie(s.classifier, s.target, s.filter_threshold) = key;
    s.n_runs = members.size();
    auto col = [&](auto field) {
      std::vector<double> v;
      for (const auto* r : members) v.push_back(field(*r));
      return mean_std(v);
    };
    s.n_train_mean = col([](const BlockResult& r) { return static_cast<double>(r.n_train); }).mean;
    s.cvcf_mean = col([](const BlockResult& r) { return r.imbalance.cvcf; }).mean;
    s.ir_mean = col([](const BlockResult& r) { return r.imbalance.ir; }).mean;
    s.necd_mean = col([](const BlockResult& r) { return r.imbalance.necd; }).mean;
    const auto acc = col([](const BlockResult& r) { return r.accuracy; });
    const auto mf1 = col([](const BlockResult& r) { return r.macro_f1; });
    const auto wf1 = col([](const BlockResult& r) { return r.weighted_f1; });
    const auto sec = col([](const BlockResult& r) { return r.train_seconds; });
    s.accuracy_mean = acc.mean;
    s.accuracy_std = acc.std;
    s.macro_f1_mean = mf1.mean;
    s.macro_f1_std = mf1.std;
    s.weighted_f1_mean = wf1.mean;
    s.weighted_f1_std = wf1.std;
    s.train_seconds_mean = sec.mean;
    s.train_seconds_std = sec.std;
    out.push_back(std::move(s));
  }
  return out;
}

void write_summary(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << "classifier,target,filter_threshold,n_runs,n_train_mean,cvcf_mean,ir_mean,necd_mean,"
         "accuracy_mean,accuracy_std,macro_f1_mean,macro_f1_std,weighted_f1_mean,weighted_f1_std,"
         "train_seconds_mean,train_seconds_std\n";
  for (const auto& s : rows) {
    out << quote_csv_field(s.classifier) << ',' << quote_csv_field(s.target) << ',' << s.filter_threshold
        << ',' << s.n_runs << ',' << format_double(s.n_train_mean) << ',' << format_double(s.cvcf_mean)
        << ',' << format_double(s.ir_mean) << ',' << format_double(s.necd_mean) << ','
        << format_double(s.accuracy_mean) << ',' << format_double(s.accuracy_std) << ','
        << format_double(s.macro_f1_mean) << ',' << format_double(s.macro_f1_std) << ','
        << format_double(s.weighted_f1_mean) << ',' << format_double(s.weighted_f1_std) << ','
        << format_double(s.train_seconds_mean) << ',' << format_double(s.train_seconds_std) << '\n';
  }
}

void write_summary(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
  auto f = open_out(path);
  write_summary(rows, f);
  if (!f) throw IoError("failed writing " + path.string());
}

void write_degradation(const std::vector<SummaryRow>& rows, std::ostream& out) {
  std::vector<const SummaryRow*> sorted;
  for (const auto& r : rows) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const SummaryRow* a, const SummaryRow* b) {
    return std::tie(a->classifier, a->target, a->ir_mean) < std::tie(b->classifier, b->target, b->ir_mean);
  });
  out << "classifier,target,filter_threshold,cvcf,ir,necd,weighted_f1,macro_f1,accuracy\n";
  for (const auto* s : sorted) {
    out << quote_csv_field(s->classifier) << ',' << quote_csv_field(s->target) << ','
        << s->filter_threshold << ',' << format_double(s->cvcf_mean) << ',' << format_double(s->ir_mean)
        << ',' << format_double(s->necd_mean) << ',' << format_double(s->weighted_f1_mean) << ','
        << format_double(s->macro_f1_mean) << ',' << format_double(s->accuracy_mean) << '\n';
  }
}

void write_degradation(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
  auto f = open_out(path);
  write_degradation(rows, f);
  if (!f) throw IoError("failed writing " + path.string());
}

Metric parse_metric(std::string_view name) {
  if (name == "accuracy") return Metric::Accuracy;
  if (name == "macro_f1") return Metric::MacroF1;
  if (name == "weighted_f1") return Metric::WeightedF1;
  if (name == "train_seconds") return Metric::TrainSeconds;
  throw InvalidArgument("metric must be accuracy, macro_f1, weighted_f1 or train_seconds, got '" +
                        std::string(name) + "'");
}

Direction natural_direction(Metric metric) {
  return metric == Metric::TrainSeconds ? Direction::Minimize : Direction::Maximize;
}

BlockMatrix pivot_results(const std::vector<BlockResult>& rows, Metric metric,
                          std::vector<std::string>* dropped) {
  auto value = [metric](const BlockResult& r) {
    switch (metric) {
      case Metric::Accuracy: return r.accuracy;
      case Metric::MacroF1: return r.macro_f1;
      case Metric::WeightedF1: return r.weighted_f1;
      case Metric::TrainSeconds: return r.train_seconds;
    }
    return r.weighted_f1;
  };
  std::set<std::string> classifiers;
  using Block = std::pair<std::string, std::size_t>;
  std::map<Block, std::map<std::string, std::pair<double, int>>> cells;
  for (const auto& r : rows) {
    classifiers.insert(r.classifier);
    if (!r.ok()) continue;
    auto& c = cells[{r.target, r.filter_threshold}][r.classifier];
    c.first += value(r);
    c.second += 1;
  }
  BlockMatrix m;
  m.treatments.assign(classifiers.begin(), classifiers.end());
  std::vector<std::vector<double>> kept;
  for (const auto& [block, per] : cells) {
    const std::string name = block.first + "@" + std::to_string(block.second);
    if (per.size() != classifiers.size()) {
      if (dropped) dropped->push_back(name);
      continue;
    }
    std::vector<double> row;
    for (const auto& c : m.treatments) row.push_back(per.at(c).first / per.at(c).second);
    kept.push_back(std::move(row));
    m.blocks.push_back(name);
  }
  m.values.resize(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(m.treatments.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) {
    for (std::size_t j = 0; j < kept[i].size(); ++j) {
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = kept[i][j];
    }
  }
  return m;
}

}  // namespace imbench
