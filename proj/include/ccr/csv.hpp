#pragma once

// RFC-4180 style CSV reading/writing and locale-independent number parsing
// via std::from_chars / std::to_chars.

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ccr::csv {

struct Row {
  std::size_t line = 0;  // 1-based physical line where the row starts
  std::vector<std::string> fields;
};

/// Reads every record of `in`. Quoted fields may contain commas, doubled
/// quotes and newlines. Blank lines are skipped. A UTF-8 BOM is ignored.
std::vector<Row> read_all(std::istream& in);

/// Looks up the column indices of `required` in a header row; throws a parse
/// error naming `source` when a column is absent.
std::vector<std::size_t> require_columns(const Row& header, const std::vector<std::string_view>& required,
                                         std::string_view source);

std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);
std::optional<bool> parse_bool(std::string_view text);

/// Semicolon-separated reals, e.g. "0.1;-2;3e-4".
std::optional<std::vector<double>> parse_real_list(std::string_view text);
std::string format_real_list(const std::vector<double>& values);

/// Shortest representation that round-trips exactly.
std::string format_double(double value);

std::string_view trim(std::string_view text);

}  // namespace ccr::csv
