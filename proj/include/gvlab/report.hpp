#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gvlab {

/// One named check with its measured values, tolerance and verdict.
struct CheckResult {
  std::string name;
  std::vector<std::pair<std::string, double>> values;
  double tolerance = 0.0;
  bool pass = false;
};

struct RunReport {
  std::string scenario;
  std::array<int, 3> grid{0, 0, 0};
  double tol_scale = 1.0;
  double dt = 1e-3;
  std::optional<std::string> timestamp;
  std::vector<CheckResult> checks;
  bool all_pass = true;
};

/// Deterministic JSON rendering: fixed key order, doubles with 17
/// significant digits, no locale dependence.
std::string to_json(const RunReport& rep);

/// RFC3339-ish UTC timestamp for the report header.
std::string utc_timestamp();

/// Formats a double with 17 significant digits (used by the JSON and CSV
/// writers).
std::string format_double(double v);

struct SweepRow {
  double axis_value = 0.0;
  std::vector<std::pair<std::string, double>> values;
};

struct SweepTable {
  std::string scenario;
  std::string check;
  std::string axis;  // grid | dt | amplitude
  std::vector<SweepRow> rows;
  std::vector<double> observed_orders;  // log2 ratios of successive errors
};

std::string to_csv(const SweepTable& table);

}  // namespace gvlab
