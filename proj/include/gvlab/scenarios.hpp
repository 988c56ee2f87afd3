#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gvlab/geometry.hpp"

namespace gvlab {

/// A named (omega, T, g) configuration with its analytic ground truth.
struct Scenario {
  std::string name;
  std::string description;
  std::array<int, 3> default_grid{64, 64, 64};
  bool periodic = true;
  double k_min = 0.0;                  // Frenet mask threshold
  std::optional<double> expected_gv;   // closed-form value when known
  bool integrable = false;
  bool eta_zero = false;
  std::map<std::string, double> params;

  CompatiblePair build(std::array<int, 3> n) const;
};

const std::vector<Scenario>& scenario_catalog();

/// Lookup by name; throws std::invalid_argument for unknown names.
const Scenario& find_scenario(const std::string& name);

/// Tensor-product raised-cosine bump centred in the grid with the given
/// support fraction per axis (smooth, compactly supported; identically one
/// nowhere). Periodic axes treat the window relative to the full period.
ScalarField bump_field(const ChartGrid& g, double support_fraction);

/// Coordinate offset from the grid centre along one axis (0-based), useful
/// for chart functions like p2 = -x3 localized by a bump.
ScalarField centered_coordinate(const ChartGrid& g, int axis);

}  // namespace gvlab
