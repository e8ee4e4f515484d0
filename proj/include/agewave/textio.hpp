#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace agewave {

/// One CSV value formatted with %.17g so rewrites are byte-identical.
std::string csv_number(double x);

/// Writes header + rows, one "%.17g" cell per column, '\n' line ends.
/// Throws IoError when the file cannot be opened or written.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Reads a two-column numeric CSV (header line required, extra columns
/// rejected). Used for tabulated dispersal kernels (columns: y, J).
struct TwoColumnTable {
  std::vector<double> first, second;
};
TwoColumnTable read_two_column_csv(const std::string& path);

/// Whole file as a string. Throws IoError when unreadable.
std::string read_text_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& body);

/// FNV-1a 64-bit digest, printed as 16 lowercase hex digits.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex_digest(std::uint64_t h);

}  // namespace agewave
