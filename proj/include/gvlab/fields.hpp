#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "gvlab/grid.hpp"

namespace gvlab {

struct ScalarField {
  ChartGrid grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const ChartGrid& g) : grid(g), v(g.size(), 0.0) {}
};

/// Contravariant components in the coordinate basis (d1, d2, d3).
struct VectorField {
  ChartGrid grid;
  std::array<std::vector<double>, 3> c;

  VectorField() = default;
  explicit VectorField(const ChartGrid& g) : grid(g) {
    for (auto& x : c) x.assign(g.size(), 0.0);
  }
};

/// Differential form of degree 0..3.
/// Component bases:
///   deg 0:  single value                 -> c[0]
///   deg 1:  (dx1, dx2, dx3)              -> c[0..2]
///   deg 2:  (dx2^dx3, dx3^dx1, dx1^dx2)  -> c[0..2]
///   deg 3:  dx1^dx2^dx3                  -> c[0]
/// Orientation dx1^dx2^dx3 is declared positive.
struct KForm {
  ChartGrid grid;
  int degree = 0;
  std::array<std::vector<double>, 3> c;

  KForm() = default;
  KForm(const ChartGrid& g, int deg) : grid(g), degree(deg) {
    if (deg < 0 || deg > 3)
      throw std::invalid_argument("KForm: degree must be 0..3");
    for (int i = 0; i < ncomp(); ++i) c[i].assign(g.size(), 0.0);
  }

  int ncomp() const { return (degree == 0 || degree == 3) ? 1 : 3; }
};

/// Symmetric metric components per point: (g11,g12,g13,g22,g23,g33).
struct MetricField {
  ChartGrid grid;
  std::array<std::vector<double>, 6> g;

  MetricField() = default;
  explicit MetricField(const ChartGrid& gr) : grid(gr) {
    for (auto& x : g) x.assign(gr.size(), 0.0);
  }

  static int sym_index(int i, int j) {
    if (i > j) std::swap(i, j);
    static constexpr int tab[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return tab[i][j];
  }

  double at(std::size_t p, int i, int j) const {
    return g[sym_index(i, j)][p];
  }
};

using PointFn = std::function<double(double, double, double)>;
using Point3Fn = std::function<std::array<double, 3>(double, double, double)>;

inline ScalarField make_scalar(const ChartGrid& g, const PointFn& f) {
  ScalarField s(g);
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k)
        s.v[g.index(i, j, k)] = f(g.coord(0, i), g.coord(1, j), g.coord(2, k));
  return s;
}

inline VectorField make_vector(const ChartGrid& g, const Point3Fn& f) {
  VectorField w(g);
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        const auto val = f(g.coord(0, i), g.coord(1, j), g.coord(2, k));
        const std::size_t p = g.index(i, j, k);
        for (int a = 0; a < 3; ++a) w.c[a][p] = val[a];
      }
  return w;
}

inline KForm make_one_form(const ChartGrid& g, const Point3Fn& f) {
  KForm a(g, 1);
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        const auto val = f(g.coord(0, i), g.coord(1, j), g.coord(2, k));
        const std::size_t p = g.index(i, j, k);
        for (int c = 0; c < 3; ++c) a.c[c][p] = val[c];
      }
  return a;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

inline double max_abs(const ScalarField& s) { return max_abs(s.v); }

inline double max_abs(const KForm& a) {
  double m = 0.0;
  for (int i = 0; i < a.ncomp(); ++i) m = std::max(m, max_abs(a.c[i]));
  return m;
}

inline double max_abs(const VectorField& w) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) m = std::max(m, max_abs(w.c[i]));
  return m;
}

inline void check_same_grid(const ChartGrid& a, const ChartGrid& b,
                            const char* where) {
  if (!(a == b))
    throw std::invalid_argument(std::string(where) + ": operands live on different grids");
}

/// a += s*b, componentwise, for forms of equal degree.
inline void axpy(KForm& a, double s, const KForm& b) {
  check_same_grid(a.grid, b.grid, "axpy");
  if (a.degree != b.degree) throw std::invalid_argument("axpy: degree mismatch");
  for (int i = 0; i < a.ncomp(); ++i)
    for (std::size_t p = 0; p < a.c[i].size(); ++p) a.c[i][p] += s * b.c[i][p];
}

inline KForm scaled(const KForm& a, double s) {
  KForm r = a;
  for (int i = 0; i < r.ncomp(); ++i)
    for (auto& x : r.c[i]) x *= s;
  return r;
}

inline KForm form_difference(const KForm& a, const KForm& b) {
  KForm r = a;
  axpy(r, -1.0, b);
  return r;
}

}  // namespace gvlab
