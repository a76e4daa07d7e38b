#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dmem {

// Minimal delimited-text table. Lines starting with '#' are kept separately
// so metadata headers survive a round trip.
struct CsvTable {
  std::vector<std::string> comments;  // leading '#' lines, verbatim
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column_index(const std::string& name) const;  // -1 when absent
  int require_column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in, char delim = ',');
CsvTable read_csv_file(const std::string& path, char delim = ',');

void write_csv(std::ostream& out, const CsvTable& table, char delim = ',');
void write_csv_file(const std::string& path, const CsvTable& table, char delim = ',');

// Numeric formatting used by every writer: round-trip exact for double.
std::string format_double(double v);
double parse_double(const std::string& text);  // throws on garbage; "" -> NaN

}  // namespace dmem
