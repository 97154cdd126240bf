#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gapdense/bigfloat.hpp"

namespace gapdense {

// Significant decimal digits carrying the full information of a binary
// significand of the given width.
long decimal_digits_for_bits(long bits);

// Full-working-precision decimal rendering used in every CSV cell.
std::string format_real(const BigFloat& v, long bits);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_text() const;
  static CsvTable parse(std::string_view text);
};

struct CheckReport {
  bool ok = true;
  std::vector<std::string> problems;
};

// Re-verifies row-level invariants of a CSV this tool emitted; the column
// set identifies which checks apply.
CheckReport check_csv(const CsvTable& table);

}  // namespace gapdense
