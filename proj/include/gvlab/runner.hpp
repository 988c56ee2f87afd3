#pragma once

#include "gvlab/report.hpp"
#include "gvlab/scenarios.hpp"

namespace gvlab {

struct RunOptions {
  std::string scenario;
  std::array<int, 3> grid{0, 0, 0};       // 0 = scenario default
  std::vector<std::string> checks;        // empty = scenario defaults
  double tol_scale = 1.0;
  double dt = 1e-3;
  bool timestamp = true;
};

/// Names of the checks the scenario runs by default (deterministic order).
std::vector<std::string> default_checks(const Scenario& sc);

/// All check names the runner knows.
std::vector<std::string> known_checks();

/// Executes the requested checks; throws std::invalid_argument for an
/// unknown scenario or check name.
RunReport run(const RunOptions& opt);

struct SweepOptions {
  std::string scenario;
  std::string check;            // gv_gap | rwood_pointwise | ddalpha |
                                // stokes | variation_fd | confoliation_margin
  std::string axis;             // grid | dt | amplitude
  std::vector<double> values;   // >= 3 values required
  std::array<int, 3> grid{0, 0, 0};
  double dt = 1e-3;
};

SweepTable sweep(const SweepOptions& opt);

}  // namespace gvlab
