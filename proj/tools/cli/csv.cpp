#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <string>

#include "cli.hpp"
#include "stablepower/errors.hpp"

namespace stablepower::cli {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  s = s.substr(b, e - b);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(std::string_view(line).substr(start)));
      break;
    }
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

double parse_number(const std::string& field, std::size_t row, const std::string& column) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw ParseError("row " + std::to_string(row + 1) + ", column '" + column +
                     "': not a finite number: '" + field + "'");
  }
  return v;
}

}  // namespace

bool is_missing(std::string_view field) {
  std::string lower(field);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower.empty() || lower == "na" || lower == "nan" || lower == "?";
}

CsvTable read_csv(std::istream& in, bool has_header) {
  CsvTable table;
  std::string line;
  std::size_t width = 0;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_line(line);
    if (first) {
      width = fields.size();
      first = false;
      if (has_header) {
        table.header = std::move(fields);
        continue;
      }
      for (std::size_t i = 0; i < width; ++i) table.header.push_back(std::to_string(i));
    }
    if (fields.size() != width) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                       " fields, found " + std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (first) throw ParseError("input is empty");
  return table;
}

CsvTable read_csv_file(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_csv(in, has_header);
}

Column select_column(const CsvTable& table, std::string_view spec) {
  std::size_t index = table.header.size();
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i] == spec) {
      index = i;
      break;
    }
  }
  if (index == table.header.size()) {
    const std::string s(spec);
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || v < 0 || static_cast<std::size_t>(v) >= table.header.size()) {
      throw ConfigError("unknown column '" + s + "'");
    }
    index = static_cast<std::size_t>(v);
  }
  Column col;
  col.name = table.header[index];
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string& field = table.rows[r][index];
    if (is_missing(field)) {
      ++col.dropped;
      continue;
    }
    col.values.push_back(parse_number(field, r, col.name));
  }
  return col;
}

std::vector<Column> select_columns(const CsvTable& table, const std::vector<std::string>& specs) {
  std::vector<Column> out;
  if (specs.empty()) {
    for (const std::string& name : table.header) out.push_back(select_column(table, name));
  } else {
    for (const std::string& spec : specs) out.push_back(select_column(table, spec));
  }
  return out;
}

}  // namespace stablepower::cli
