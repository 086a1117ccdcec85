#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ufilter {

/// Shortest round-trip decimal form of a double (std::to_chars); parsing the
/// result recovers the exact bit pattern, which the manifest and the
/// byte-identical re-run contract rely on.
std::string format_double(double v);

std::string format_int(long long v);
std::string format_uint(std::uint64_t v);

/// Joins cells with commas; no quoting (cell content never contains commas).
std::string csv_row(const std::vector<std::string>& cells);

/// Splits one CSV line at commas.
std::vector<std::string> split_csv_line(const std::string& line);

/// Parses a double (full-string match); throws ConfigError on failure.
double parse_double(const std::string& s);
long long parse_int(const std::string& s);
std::uint64_t parse_uint(const std::string& s);
bool parse_bool(const std::string& s);

/// Reads a numeric CSV with a header row; returns column names and rows.
/// Throws ConfigError on ragged rows or non-numeric cells.
struct NumericCsv {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
NumericCsv read_numeric_csv(const std::string& path);

}  // namespace ufilter
