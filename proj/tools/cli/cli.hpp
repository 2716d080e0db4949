#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace stablepower::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 2,
  kExitDomain = 3,
  kExitDegenerate = 4,
  kExitConfig = 5,
};

struct CsvTable {
  std::vector<std::string> header;  // synthesized as "0", "1", ... without a header row
  std::vector<std::vector<std::string>> rows;
};

/// Comma-separated, '.' decimal point, optional header row, surrounding
/// whitespace and double quotes stripped. Throws ParseError on ragged rows.
CsvTable read_csv(std::istream& in, bool has_header);
CsvTable read_csv_file(const std::string& path, bool has_header);

/// "", "NA", "NaN" and "?" (any case) mark a missing value.
bool is_missing(std::string_view field);

struct Column {
  std::string name;
  std::vector<double> values;
  std::size_t dropped = 0;  // rows with a missing value
};

/// Selects a column by header name or zero-based index. Throws ConfigError
/// for an unknown column and ParseError for a non-numeric field.
Column select_column(const CsvTable& table, std::string_view spec);

/// Every column when specs is empty.
std::vector<Column> select_columns(const CsvTable& table, const std::vector<std::string>& specs);

/// Parses and runs one invocation; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stablepower::cli
