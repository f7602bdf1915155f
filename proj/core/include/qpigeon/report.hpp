#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpigeon/state.hpp"

namespace qpigeon {

// One named verification check. expected/actual are pre-formatted so a
// report is a pure value: rendering never re-does numerics.
struct CheckResult {
  std::string name;
  std::string expected;
  std::string actual;
  double tolerance = 0.0;
  bool pass = false;
};

// Tabular payload (e.g. sweep rows); columns name the cells of each row.
struct DataTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string tool_version;
  std::string command;
  std::vector<CheckResult> checks;
  std::optional<DataTable> data;
  bool pass = true;

  // Appends a check and folds its result into the aggregate pass flag.
  void add(CheckResult check);
};

// Shortest round-trip decimal form (parses back to the identical double).
// Used for machine-read payloads: CSV cells and data rows.
std::string format_real(double value);
// 6-significant-digit form for check expected/actual strings.
std::string format_value(double value);
// a+bi / a-bi built from format_value parts.
std::string format_complex(Complex value);

// |expected - actual| <= tolerance checks, formatted on construction.
CheckResult make_check(std::string name, double expected, double actual,
                       double tolerance);
CheckResult make_check(std::string name, Complex expected, Complex actual,
                       double tolerance);

}  // namespace qpigeon
