#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace onreg {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Plain comma-separated values: no quoting, blank lines skipped, fields trimmed.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(std::string_view text);
void write_csv(const CsvTable& table, const std::string& path);
std::string to_csv_text(const CsvTable& table);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);

}  // namespace onreg
