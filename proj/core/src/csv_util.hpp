#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace imbench::detail {

// RFC-4180 style field splitting for a single line: commas separate fields,
// double quotes enclose fields, "" inside quotes is a literal quote.
// Embedded newlines are not supported.
std::vector<std::string> split_csv_line(std::string_view line);

std::string quote_csv_field(std::string_view field);

std::string trim(std::string_view s);

// Shortest round-trip decimal representation (17 significant digits).
std::string format_double(double value);

}  // namespace imbench::detail
