#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace gvlab {

enum class Topology { periodic, bounded };

/// Structured 3D grid on a rectangular chart. Periodic axes cover
/// [origin, origin+extent) with spacing extent/n; bounded axes cover
/// [origin, origin+extent] with spacing extent/(n-1).
struct ChartGrid {
  std::array<int, 3> n{8, 8, 8};
  std::array<double, 3> extent{6.283185307179586, 6.283185307179586,
                               6.283185307179586};
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  std::array<Topology, 3> topo{Topology::periodic, Topology::periodic,
                               Topology::periodic};

  ChartGrid() = default;
  ChartGrid(std::array<int, 3> sizes, std::array<double, 3> ext,
            std::array<double, 3> org, std::array<Topology, 3> top)
      : n(sizes), extent(ext), origin(org), topo(top) {
    validate();
  }

  void validate() const {
    for (int a = 0; a < 3; ++a) {
      if (n[a] < 8)
        throw std::invalid_argument("ChartGrid: size on axis " +
                                    std::to_string(a + 1) +
                                    " must be >= 8 (4th-order stencils)");
      if (!(extent[a] > 0.0))
        throw std::invalid_argument("ChartGrid: extent on axis " +
                                    std::to_string(a + 1) +
                                    " must be positive");
    }
  }

  double spacing(int axis) const {
    return topo[axis] == Topology::periodic ? extent[axis] / n[axis]
                                            : extent[axis] / (n[axis] - 1);
  }

  double coord(int axis, int i) const {
    return origin[axis] + spacing(axis) * i;
  }

  std::size_t size() const {
    return static_cast<std::size_t>(n[0]) * n[1] * n[2];
  }

  // Row-major with the third axis fastest.
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n[1] + j) * n[2] + k;
  }

  double cell_volume() const {
    return spacing(0) * spacing(1) * spacing(2);
  }

  bool fully_periodic() const {
    return topo[0] == Topology::periodic && topo[1] == Topology::periodic &&
           topo[2] == Topology::periodic;
  }

  friend bool operator==(const ChartGrid& a, const ChartGrid& b) {
    return a.n == b.n && a.extent == b.extent && a.origin == b.origin &&
           a.topo == b.topo;
  }
};

/// Convenience builders for the two grid families used throughout.
inline ChartGrid torus_grid(int n, double extent = 6.283185307179586) {
  return ChartGrid({n, n, n}, {extent, extent, extent}, {0.0, 0.0, 0.0},
                   {Topology::periodic, Topology::periodic,
                    Topology::periodic});
}

inline ChartGrid torus_grid(std::array<int, 3> n,
                            double extent = 6.283185307179586) {
  return ChartGrid(n, {extent, extent, extent}, {0.0, 0.0, 0.0},
                   {Topology::periodic, Topology::periodic,
                    Topology::periodic});
}

inline ChartGrid bounded_grid(std::array<int, 3> n, std::array<double, 3> lo,
                              std::array<double, 3> hi) {
  return ChartGrid(n, {hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]}, lo,
                   {Topology::bounded, Topology::bounded, Topology::bounded});
}

/// Periodic in x1,x2, bounded in z: the chart type used for the
/// coordinate examples with T = d/dz on a z-interval.
inline ChartGrid z_chart_grid(std::array<int, 3> n, double zlo, double zhi,
                              double xy_extent = 6.283185307179586) {
  return ChartGrid(n, {xy_extent, xy_extent, zhi - zlo}, {0.0, 0.0, zlo},
                   {Topology::periodic, Topology::periodic,
                    Topology::bounded});
}

}  // namespace gvlab
