#include "agewave/textio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "agewave/errors.hpp"

namespace agewave {

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k) out << ',';
    out << header[k];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw IoError("csv row width " + std::to_string(row.size()) + " != header width " +
                    std::to_string(header.size()));
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      out << csv_number(row[k]);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

TwoColumnTable read_two_column_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  TwoColumnTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty csv: " + path);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw IoError(path + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
      }
      while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
      if (used != cell.size())
        throw IoError(path + ":" + std::to_string(lineno) + ": trailing junk in '" + cell + "'");
      values.push_back(v);
    }
    if (values.size() != 2)
      throw IoError(path + ":" + std::to_string(lineno) + ": expected 2 columns, got " +
                    std::to_string(values.size()));
    table.first.push_back(values[0]);
    table.second.push_back(values[1]);
  }
  if (table.first.empty()) throw IoError("no data rows: " + path);
  return table;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << body;
  if (!out) throw IoError("write failed: " + path);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex_digest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace agewave
