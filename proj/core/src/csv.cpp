#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <unordered_map>

#include "csv_util.hpp"
#include "imbench/dataset.hpp"

namespace imbench {

namespace detail {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (in_quotes) throw DataError("unterminated quoted field");
  fields.push_back(std::move(current));
  return fields;
}

std::string quote_csv_field(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace detail

namespace {

std::optional<double> parse_number(std::string_view text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

void strip_bom(std::string& line) {
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
      static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
    line.erase(0, 3);
  }
}

}  // namespace

bool is_missing_cell(std::string_view cell) {
  const std::string t = detail::trim(cell);
  return t.empty() || t == "NA";
}

RawDataset parse_csv(std::istream& in, const ColumnSchema& schema) {
  schema.validate();
  std::string line;
  if (!std::getline(in, line)) throw DataError("CSV is empty (no header row)");
  strip_bom(line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = detail::split_csv_line(line);
  for (auto& h : header) h = detail::trim(h);

  // schema column -> header position
  std::vector<std::size_t> position(schema.columns.size());
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const auto& name = schema.columns[c].name;
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("CSV header lacks schema column '" + name + "'");
    position[c] = static_cast<std::size_t>(it - header.begin());
  }

  RawDataset raw;
  std::vector<std::size_t> feature_schema_index;
  std::size_t label_index = 0;
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const auto& spec = schema.columns[c];
    if (spec.role == ColumnRole::Label) {
      label_index = c;
      raw.label_name = spec.name;
    } else if (spec.role == ColumnRole::Feature) {
      RawColumn col;
      col.name = spec.name;
      col.kind = spec.kind;
      raw.columns.push_back(std::move(col));
      feature_schema_index.push_back(c);
    }
  }

  std::unordered_map<std::string, int> label_ids;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    std::vector<std::string> cells;
    try {
      cells = detail::split_csv_line(line);
    } catch (const DataError& e) {
      throw DataError("malformed CSV row " + std::to_string(line_no) + ": " + e.what());
    }
    if (cells.size() != header.size()) {
      throw DataError("malformed CSV row " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(cells.size()));
    }

    const std::string& label_cell = cells[position[label_index]];
    if (is_missing_cell(label_cell)) {
      ++raw.skipped_unlabelled;
      continue;
    }
    const std::string label_value = detail::trim(label_cell);
    auto [it, inserted] = label_ids.try_emplace(label_value, static_cast<int>(raw.class_names.size()));
    if (inserted) raw.class_names.push_back(label_value);
    raw.labels.push_back(it->second);

    for (std::size_t f = 0; f < raw.columns.size(); ++f) {
      RawColumn& col = raw.columns[f];
      const std::string& cell = cells[position[feature_schema_index[f]]];
      const bool missing = is_missing_cell(cell);
      col.missing.push_back(missing);
      if (col.kind == ColumnKind::Continuous) {
        if (missing) {
          col.numeric.push_back(std::numeric_limits<double>::quiet_NaN());
        } else {
          const std::string t = detail::trim(cell);
          auto value = parse_number(t);
          if (!value || !std::isfinite(*value)) {
            throw DataError("malformed CSV row " + std::to_string(line_no) + ": column '" +
                            col.name + "' expects a number, found '" + t + "'");
          }
          col.numeric.push_back(*value);
        }
      } else {
        col.categorical.push_back(missing ? std::string() : detail::trim(cell));
      }
    }
  }
  return raw;
}

RawDataset load_csv(const std::filesystem::path& path, const ColumnSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV file '" + path.string() + "'");
  try {
    return parse_csv(in, schema);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

ColumnSchema ColumnSchema::infer(const std::filesystem::path& csv_path, std::string_view label,
                                 std::size_t probe_rows) {
  std::ifstream in(csv_path);
  if (!in) throw IoError("cannot open CSV file '" + csv_path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError(csv_path.string() + ": CSV is empty");
  strip_bom(line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = detail::split_csv_line(line);
  std::vector<bool> numeric(header.size(), true);
  for (std::size_t r = 0; r < probe_rows && std::getline(in, line); ++r) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto cells = detail::split_csv_line(line);
    for (std::size_t c = 0; c < std::min(cells.size(), header.size()); ++c) {
      if (!is_missing_cell(cells[c]) && !parse_number(detail::trim(cells[c]))) numeric[c] = false;
    }
  }
  ColumnSchema schema;
  for (std::size_t c = 0; c < header.size(); ++c) {
    ColumnSpec spec;
    spec.name = detail::trim(header[c]);
    spec.role = spec.name == label ? ColumnRole::Label : ColumnRole::Feature;
    spec.kind = numeric[c] ? ColumnKind::Continuous : ColumnKind::Categorical;
    schema.columns.push_back(std::move(spec));
  }
  if (!schema.find(label)) {
    throw DataError(csv_path.string() + ": CSV header lacks label column '" + std::string(label) + "'");
  }
  return schema;
}

}  // namespace imbench
