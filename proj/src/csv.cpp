#include "ccr/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "ccr/error.hpp"

namespace ccr::csv {

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<Row> read_all(std::istream& in) {
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() >= 3 && static_cast<unsigned char>(data[0]) == 0xEF &&
      static_cast<unsigned char>(data[1]) == 0xBB && static_cast<unsigned char>(data[2]) == 0xBF) {
    data.erase(0, 3);
  }

  std::vector<Row> rows;
  Row current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  current.line = line;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    const bool blank = current.fields.size() == 1 && trim(current.fields[0]).empty();
    if (!blank) rows.push_back(std::move(current));
    current = Row{};
  };

  for (std::size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started || trim(field).empty()) {
          field.clear();
          in_quotes = true;
          field_started = true;
        } else {
          field.push_back(c);
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        current.line = line;
        break;
      default:
        field.push_back(c);
        field_started = true;
        break;
    }
  }
  if (in_quotes) {
    throw Error(ErrorKind::Parse, "unterminated quoted field starting near line " + std::to_string(current.line));
  }
  if (field_started || !field.empty() || !current.fields.empty()) end_row();
  return rows;
}

std::vector<std::size_t> require_columns(const Row& header, const std::vector<std::string_view>& required,
                                         std::string_view source) {
  std::vector<std::size_t> indices;
  indices.reserve(required.size());
  for (const auto name : required) {
    const auto it = std::find_if(header.fields.begin(), header.fields.end(),
                                 [&](const std::string& f) { return trim(f) == name; });
    if (it == header.fields.end()) {
      throw Error(ErrorKind::Parse, std::string(source) + ": missing column '" + std::string(name) + "' in header");
    }
    indices.push_back(static_cast<std::size_t>(it - header.fields.begin()));
  }
  return indices;
}

std::string escape(std::string_view field) {
  const bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<long long> parse_int(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<bool> parse_bool(std::string_view text) {
  text = trim(text);
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "1" || lower == "true" || lower == "yes" || lower == "y") return true;
  if (lower == "0" || lower == "false" || lower == "no" || lower == "n") return false;
  return std::nullopt;
}

std::optional<std::vector<double>> parse_real_list(std::string_view text) {
  std::vector<double> values;
  text = trim(text);
  if (text.empty()) return values;
  std::size_t start = 0;
  while (true) {
    const auto sep = text.find(';', start);
    const auto token = text.substr(start, sep == std::string_view::npos ? std::string_view::npos : sep - start);
    const auto value = parse_double(token);
    if (!value) return std::nullopt;
    values.push_back(*value);
    if (sep == std::string_view::npos) break;
    start = sep + 1;
  }
  return values;
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ec == std::errc{} ? ptr : buffer);
}

std::string format_real_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out.push_back(';');
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace ccr::csv
