#include "dmem/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dmem {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"' && cell.empty()) {
      quoted = true;
    } else if (c == delim) {
      out.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  out.push_back(std::move(cell));
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

}  // namespace

int CsvTable::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (columns[j] == name) return static_cast<int>(j);
  return -1;
}

int CsvTable::require_column(const std::string& name) const {
  const int j = column_index(name);
  if (j < 0) throw std::runtime_error("missing required column '" + name + "'");
  return j;
}

CsvTable read_csv(std::istream& in, char delim) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line);
      continue;
    }
    auto cells = split_line(line, delim);
    for (auto& c : cells) c = trim(c);
    if (!have_header) {
      t.columns = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != t.columns.size())
        throw std::runtime_error("ragged csv row: expected " + std::to_string(t.columns.size()) +
                                 " cells, got " + std::to_string(cells.size()));
      t.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw std::runtime_error("empty csv input: no header row");
  return t;
}

CsvTable read_csv_file(const std::string& path, char delim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_csv(in, delim);
}

void write_csv(std::ostream& out, const CsvTable& table, char delim) {
  for (const auto& c : table.comments) out << c << '\n';
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (j) out << delim;
    out << table.columns[j];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << delim;
      out << row[j];
    }
    out << '\n';
  }
}

void write_csv_file(const std::string& path, const CsvTable& table, char delim) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(out, table, delim);
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << v;
  return os.str();
}

double parse_double(const std::string& text) {
  if (text.empty() || text == "NA" || text == "nan" || text == "NaN")
    return std::numeric_limits<double>::quiet_NaN();
  const char* first = text.data();
  const char* last = first + text.size();
  double v = 0.0;
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || p != last)
    throw std::invalid_argument("cannot parse number '" + text + "'");
  return v;
}

}  // namespace dmem
