#include "gapdense/csvio.hpp"

#include <map>
#include <optional>
#include <sstream>

#include "gapdense/errors.hpp"

namespace gapdense {

long decimal_digits_for_bits(long bits) { return (bits * 30103) / 100000 + 3; }

std::string format_real(const BigFloat& v, long bits) {
  return v.to_scientific(decimal_digits_for_bits(bits));
}

std::string CsvTable::to_text() const {
  std::ostringstream out;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
  return out.str();
}

CsvTable CsvTable::parse(std::string_view text) {
  CsvTable t;
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> cur;
  std::string cell;
  for (char ch : text) {
    if (ch == ',') {
      cur.push_back(cell);
      cell.clear();
    } else if (ch == '\n') {
      cur.push_back(cell);
      cell.clear();
      lines.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cell += ch;
    }
  }
  if (!cell.empty() || !cur.empty()) {
    cur.push_back(cell);
    lines.push_back(cur);
  }
  if (lines.empty()) throw ConfigError("empty CSV");
  t.header = lines.front();
  t.rows.assign(lines.begin() + 1, lines.end());
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) {
      throw ConfigError("CSV row width does not match the header");
    }
  }
  return t;
}

namespace {

constexpr long kCheckPrec = 256;

std::optional<BigFloat> cell_value(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    return BigFloat::of_string(s, kCheckPrec);
  } catch (const ConfigError&) {
    return std::nullopt;
  }
}

// Residual-type columns may wiggle at rounding level; anything coarser than
// this slack is a genuine violation.
bool nonincreasing(const BigFloat& prev, const BigFloat& cur) {
  BigFloat slack = BigFloat::two_pow(-100, kCheckPrec) *
                   max(BigFloat::of_long(1, kCheckPrec), abs(prev));
  return cur <= prev + slack;
}

long find_col(const CsvTable& t, const std::string& name) {
  for (size_t i = 0; i < t.header.size(); ++i) {
    if (t.header[i] == name) return static_cast<long>(i);
  }
  return -1;
}

void check_monotone_groups(const CsvTable& t, long group_col, long value_col,
                           const char* what, CheckReport& rep) {
  std::map<std::string, BigFloat> last;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    std::string key = group_col >= 0 ? t.rows[r][static_cast<size_t>(group_col)]
                                     : std::string();
    auto v = cell_value(t.rows[r][static_cast<size_t>(value_col)]);
    if (!v) {
      rep.ok = false;
      rep.problems.push_back("row " + std::to_string(r + 1) + ": bad " + what);
      continue;
    }
    auto it = last.find(key);
    if (it != last.end() && !nonincreasing(it->second, *v)) {
      rep.ok = false;
      rep.problems.push_back("row " + std::to_string(r + 1) + ": " + what +
                             " increased within group '" + key + "'");
    }
    last.insert_or_assign(key, *v);
  }
}

void check_positive(const CsvTable& t, long col, const char* what,
                    CheckReport& rep, bool allow_empty) {
  for (size_t r = 0; r < t.rows.size(); ++r) {
    const std::string& s = t.rows[r][static_cast<size_t>(col)];
    if (s.empty()) {
      if (!allow_empty) {
        rep.ok = false;
        rep.problems.push_back("row " + std::to_string(r + 1) + ": empty " +
                               what);
      }
      continue;
    }
    auto v = cell_value(s);
    if (!v || !(v->sgn() > 0)) {
      rep.ok = false;
      rep.problems.push_back("row " + std::to_string(r + 1) +
                             ": non-positive " + what);
    }
  }
}

}  // namespace

CheckReport check_csv(const CsvTable& t) {
  CheckReport rep;
  auto header_is = [&](std::initializer_list<const char*> names) {
    if (t.header.size() != names.size()) return false;
    size_t i = 0;
    for (const char* n : names) {
      if (t.header[i++] != n) return false;
    }
    return true;
  };

  if (header_is({"n", "a_n", "b_n", "gamma_nn", "p_n(0)", "ratio_k0"})) {
    check_positive(t, find_col(t, "b_n"), "b_n", rep, /*allow_empty=*/true);
    check_positive(t, find_col(t, "gamma_nn"), "gamma_nn", rep, false);
    return rep;
  }
  if (header_is({"j", "N", "residual", "method"}) ||
      header_is({"j", "N", "residual", "method", "agreement"})) {
    // group by gap and method
    CsvTable grouped = t;
    for (auto& row : grouped.rows) row[0] = row[0] + "|" + row[3];
    check_monotone_groups(grouped, 0, find_col(t, "residual"), "residual", rep);
    return rep;
  }
  if (header_is({"k", "N", "residual"})) {
    check_monotone_groups(t, 0, find_col(t, "residual"), "residual", rep);
    return rep;
  }
  if (header_is({"N", "objective", "q_norm", "gap_residual", "p_at_0"})) {
    check_monotone_groups(t, -1, find_col(t, "objective"), "objective", rep);
    check_monotone_groups(t, -1, find_col(t, "gap_residual"), "gap_residual",
                          rep);
    return rep;
  }
  if (header_is({"w", "d_t", "d1_sq"})) {
    for (size_t r = 0; r < t.rows.size(); ++r) {
      auto v = cell_value(t.rows[r][1]);
      if (!v || !v->is_zero()) {
        rep.ok = false;
        rep.problems.push_back("row " + std::to_string(r + 1) +
                               ": d_t must be exactly 0");
      }
    }
    return rep;
  }
  if (header_is({"n", "k", "ratio"})) {
    check_positive(t, find_col(t, "ratio"), "ratio", rep, false);
    return rep;
  }
  if (header_is({"i", "lambda_i", "partial_sum"})) {
    for (size_t r = 1; r < t.rows.size(); ++r) {
      auto a = cell_value(t.rows[r - 1][2]);
      auto b = cell_value(t.rows[r][2]);
      if (!a || !b || *b < *a) {
        rep.ok = false;
        rep.problems.push_back("row " + std::to_string(r + 1) +
                               ": partial sums must be nondecreasing");
      }
    }
    return rep;
  }
  rep.ok = false;
  rep.problems.push_back("unrecognized column set");
  return rep;
}

}  // namespace gapdense
