#include "gvlab/calculus.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gvlab/kernels.hpp"

namespace gvlab {

namespace {

std::vector<double> deriv(const ChartGrid& g, const std::vector<double>& in,
                          int axis0) {
  std::vector<double> out(in.size());
  derivative_axis(g, in.data(), out.data(), axis0);
  return out;
}

// Symmetric 3x3 inverse and determinant from the packed representation.
struct Sym3 {
  double a11, a12, a13, a22, a23, a33;
};

inline Sym3 load(const MetricField& g, std::size_t p) {
  return {g.g[0][p], g.g[1][p], g.g[2][p], g.g[3][p], g.g[4][p], g.g[5][p]};
}

inline double det3(const Sym3& m) {
  return m.a11 * (m.a22 * m.a33 - m.a23 * m.a23) -
         m.a12 * (m.a12 * m.a33 - m.a23 * m.a13) +
         m.a13 * (m.a12 * m.a23 - m.a22 * m.a13);
}

inline Sym3 inv3(const Sym3& m, double det) {
  const double id = 1.0 / det;
  Sym3 r;
  r.a11 = (m.a22 * m.a33 - m.a23 * m.a23) * id;
  r.a12 = (m.a13 * m.a23 - m.a12 * m.a33) * id;
  r.a13 = (m.a12 * m.a23 - m.a13 * m.a22) * id;
  r.a22 = (m.a11 * m.a33 - m.a13 * m.a13) * id;
  r.a23 = (m.a12 * m.a13 - m.a11 * m.a23) * id;
  r.a33 = (m.a11 * m.a22 - m.a12 * m.a12) * id;
  return r;
}

[[noreturn]] void throw_singular(const ChartGrid& g, std::size_t p) {
  const int n2 = g.n[1], n3 = g.n[2];
  const int k = static_cast<int>(p % n3);
  const int j = static_cast<int>((p / n3) % n2);
  const int i = static_cast<int>(p / (static_cast<std::size_t>(n2) * n3));
  throw std::domain_error("metric not positive definite at grid point (" +
                          std::to_string(i) + "," + std::to_string(j) + "," +
                          std::to_string(k) + ")");
}

}  // namespace

ScalarField partial_derivative(const ScalarField& f, int axis) {
  if (axis < 1 || axis > 3)
    throw std::invalid_argument("partial_derivative: axis must be 1, 2 or 3");
  ScalarField out(f.grid);
  out.v = deriv(f.grid, f.v, axis - 1);
  return out;
}

KForm exterior_d(const KForm& a) {
  const ChartGrid& g = a.grid;
  if (a.degree == 3)
    throw std::invalid_argument("exterior_d: degree-3 input rejected");
  if (a.degree == 0) {
    KForm r(g, 1);
    for (int ax = 0; ax < 3; ++ax) r.c[ax] = deriv(g, a.c[0], ax);
    return r;
  }
  if (a.degree == 1) {
    // curl in the 2-form basis (dx2^dx3, dx3^dx1, dx1^dx2)
    KForm r(g, 2);
    auto d1a2 = deriv(g, a.c[1], 0), d2a1 = deriv(g, a.c[0], 1);
    auto d2a3 = deriv(g, a.c[2], 1), d3a2 = deriv(g, a.c[1], 2);
    auto d3a1 = deriv(g, a.c[0], 2), d1a3 = deriv(g, a.c[2], 0);
    const std::size_t n = g.size();
    for (std::size_t p = 0; p < n; ++p) {
      r.c[0][p] = d2a3[p] - d3a2[p];
      r.c[1][p] = d3a1[p] - d1a3[p];
      r.c[2][p] = d1a2[p] - d2a1[p];
    }
    return r;
  }
  // degree 2 -> divergence of the basis components
  KForm r(g, 3);
  auto d1 = deriv(g, a.c[0], 0), d2 = deriv(g, a.c[1], 1),
       d3 = deriv(g, a.c[2], 2);
  const std::size_t n = g.size();
  for (std::size_t p = 0; p < n; ++p) r.c[0][p] = d1[p] + d2[p] + d3[p];
  return r;
}

KForm wedge(const KForm& a, const KForm& b) {
  check_same_grid(a.grid, b.grid, "wedge");
  const int da = a.degree, db = b.degree;
  if (da + db > 3)
    throw std::invalid_argument("wedge: total degree above 3 rejected");
  const ChartGrid& g = a.grid;
  const std::size_t n = g.size();
  KForm r(g, da + db);
  if (da == 0 || db == 0) {
    const KForm& s = (da == 0) ? a : b;
    const KForm& t = (da == 0) ? b : a;
    for (int i = 0; i < r.ncomp(); ++i)
      for (std::size_t p = 0; p < n; ++p) r.c[i][p] = s.c[0][p] * t.c[i][p];
    return r;
  }
  if (da == 1 && db == 1) {
    for (std::size_t p = 0; p < n; ++p) {
      r.c[0][p] = a.c[1][p] * b.c[2][p] - a.c[2][p] * b.c[1][p];
      r.c[1][p] = a.c[2][p] * b.c[0][p] - a.c[0][p] * b.c[2][p];
      r.c[2][p] = a.c[0][p] * b.c[1][p] - a.c[1][p] * b.c[0][p];
    }
    return r;
  }
  // (1,2) and (2,1): dx^i ^ e_i = dV for the cyclic 2-form basis.
  const KForm& one = (da == 1) ? a : b;
  const KForm& two = (da == 1) ? b : a;
  for (std::size_t p = 0; p < n; ++p)
    r.c[0][p] = one.c[0][p] * two.c[0][p] + one.c[1][p] * two.c[1][p] +
                one.c[2][p] * two.c[2][p];
  return r;
}

KForm interior_product(const VectorField& z, const KForm& a) {
  check_same_grid(z.grid, a.grid, "interior_product");
  const ChartGrid& g = a.grid;
  const std::size_t n = g.size();
  if (a.degree == 0)
    throw std::invalid_argument("interior_product: degree-0 input rejected");
  KForm r(g, a.degree - 1);
  if (a.degree == 1) {
    for (std::size_t p = 0; p < n; ++p)
      r.c[0][p] = a.c[0][p] * z.c[0][p] + a.c[1][p] * z.c[1][p] +
                  a.c[2][p] * z.c[2][p];
    return r;
  }
  if (a.degree == 2) {
    // i_Z(B_k e^k) has 1-form components B x Z (coordinate cross product).
    for (std::size_t p = 0; p < n; ++p) {
      const double b1 = a.c[0][p], b2 = a.c[1][p], b3 = a.c[2][p];
      const double z1 = z.c[0][p], z2 = z.c[1][p], z3 = z.c[2][p];
      r.c[0][p] = b2 * z3 - b3 * z2;
      r.c[1][p] = b3 * z1 - b1 * z3;
      r.c[2][p] = b1 * z2 - b2 * z1;
    }
    return r;
  }
  // degree 3
  for (int i = 0; i < 3; ++i)
    for (std::size_t p = 0; p < n; ++p) r.c[i][p] = a.c[0][p] * z.c[i][p];
  return r;
}

KForm lie_derivative(const VectorField& z, const KForm& a) {
  if (a.degree == 0) return interior_product(z, exterior_d(a));
  if (a.degree == 3) return exterior_d(interior_product(z, a));
  KForm r = exterior_d(interior_product(z, a));
  axpy(r, 1.0, interior_product(z, exterior_d(a)));
  return r;
}

KForm hodge_star(const MetricField& g, const KForm& a) {
  check_same_grid(g.grid, a.grid, "hodge_star");
  const std::size_t n = g.grid.size();
  if (a.degree == 0) {
    KForm r(g.grid, 3);
    for (std::size_t p = 0; p < n; ++p) {
      const double det = det3(load(g, p));
      if (!(det > 0.0)) throw_singular(g.grid, p);
      r.c[0][p] = a.c[0][p] * std::sqrt(det);
    }
    return r;
  }
  if (a.degree == 3) {
    KForm r(g.grid, 0);
    for (std::size_t p = 0; p < n; ++p) {
      const double det = det3(load(g, p));
      if (!(det > 0.0)) throw_singular(g.grid, p);
      r.c[0][p] = a.c[0][p] / std::sqrt(det);
    }
    return r;
  }
  if (a.degree == 1) {
    // (*a)_k = sqrt(det) g^{ki} a_i in the 2-form basis
    KForm r(g.grid, 2);
    for (std::size_t p = 0; p < n; ++p) {
      const Sym3 m = load(g, p);
      const double det = det3(m);
      if (!(det > 0.0)) throw_singular(g.grid, p);
      const Sym3 mi = inv3(m, det);
      const double s = std::sqrt(det);
      const double a1 = a.c[0][p], a2 = a.c[1][p], a3 = a.c[2][p];
      r.c[0][p] = s * (mi.a11 * a1 + mi.a12 * a2 + mi.a13 * a3);
      r.c[1][p] = s * (mi.a12 * a1 + mi.a22 * a2 + mi.a23 * a3);
      r.c[2][p] = s * (mi.a13 * a1 + mi.a23 * a2 + mi.a33 * a3);
    }
    return r;
  }
  // degree 2: (*B)_i = g_{ik} B_k / sqrt(det)
  KForm r(g.grid, 1);
  for (std::size_t p = 0; p < n; ++p) {
    const Sym3 m = load(g, p);
    const double det = det3(m);
    if (!(det > 0.0)) throw_singular(g.grid, p);
    const double is = 1.0 / std::sqrt(det);
    const double b1 = a.c[0][p], b2 = a.c[1][p], b3 = a.c[2][p];
    r.c[0][p] = is * (m.a11 * b1 + m.a12 * b2 + m.a13 * b3);
    r.c[1][p] = is * (m.a12 * b1 + m.a22 * b2 + m.a23 * b3);
    r.c[2][p] = is * (m.a13 * b1 + m.a23 * b2 + m.a33 * b3);
  }
  return r;
}

double integrate_3form(const KForm& a) {
  if (a.degree != 3)
    throw std::invalid_argument("integrate_3form: degree-3 form required");
  const ChartGrid& g = a.grid;
  const bool b0 = g.topo[0] == Topology::bounded;
  const bool b1 = g.topo[1] == Topology::bounded;
  const bool b2 = g.topo[2] == Topology::bounded;
  if (!b0 && !b1 && !b2) {
    return deterministic_sum(a.c[0]) * g.cell_volume();
  }
  std::vector<double> weighted(a.c[0].size());
  const int n1 = g.n[0], n2 = g.n[1], n3 = g.n[2];
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n1; ++i) {
    const double wi = (b0 && (i == 0 || i == n1 - 1)) ? 0.5 : 1.0;
    for (int j = 0; j < n2; ++j) {
      const double wj = wi * ((b1 && (j == 0 || j == n2 - 1)) ? 0.5 : 1.0);
      for (int k = 0; k < n3; ++k) {
        const double w = wj * ((b2 && (k == 0 || k == n3 - 1)) ? 0.5 : 1.0);
        const std::size_t p = g.index(i, j, k);
        weighted[p] = w * a.c[0][p];
      }
    }
  }
  return deterministic_sum(weighted) * g.cell_volume();
}

VectorField sharp(const MetricField& g, const KForm& a) {
  check_same_grid(g.grid, a.grid, "sharp");
  if (a.degree != 1) throw std::invalid_argument("sharp: 1-form required");
  VectorField r(g.grid);
  const std::size_t n = g.grid.size();
  for (std::size_t p = 0; p < n; ++p) {
    const Sym3 m = load(g, p);
    const double det = det3(m);
    if (!(det > 0.0)) throw_singular(g.grid, p);
    const Sym3 mi = inv3(m, det);
    const double a1 = a.c[0][p], a2 = a.c[1][p], a3 = a.c[2][p];
    r.c[0][p] = mi.a11 * a1 + mi.a12 * a2 + mi.a13 * a3;
    r.c[1][p] = mi.a12 * a1 + mi.a22 * a2 + mi.a23 * a3;
    r.c[2][p] = mi.a13 * a1 + mi.a23 * a2 + mi.a33 * a3;
  }
  return r;
}

KForm flat(const MetricField& g, const VectorField& z) {
  check_same_grid(g.grid, z.grid, "flat");
  KForm r(g.grid, 1);
  const std::size_t n = g.grid.size();
  for (std::size_t p = 0; p < n; ++p) {
    const Sym3 m = load(g, p);
    const double z1 = z.c[0][p], z2 = z.c[1][p], z3 = z.c[2][p];
    r.c[0][p] = m.a11 * z1 + m.a12 * z2 + m.a13 * z3;
    r.c[1][p] = m.a12 * z1 + m.a22 * z2 + m.a23 * z3;
    r.c[2][p] = m.a13 * z1 + m.a23 * z2 + m.a33 * z3;
  }
  return r;
}

ScalarField eval_one_form(const KForm& a, const VectorField& z) {
  check_same_grid(a.grid, z.grid, "eval_one_form");
  if (a.degree != 1)
    throw std::invalid_argument("eval_one_form: 1-form required");
  ScalarField r(a.grid);
  for (std::size_t p = 0; p < r.v.size(); ++p)
    r.v[p] = a.c[0][p] * z.c[0][p] + a.c[1][p] * z.c[1][p] +
             a.c[2][p] * z.c[2][p];
  return r;
}

ScalarField eval_two_form(const KForm& b, const VectorField& x,
                          const VectorField& y) {
  check_same_grid(b.grid, x.grid, "eval_two_form");
  if (b.degree != 2)
    throw std::invalid_argument("eval_two_form: 2-form required");
  ScalarField r(b.grid);
  for (std::size_t p = 0; p < r.v.size(); ++p) {
    const double c1 = x.c[1][p] * y.c[2][p] - x.c[2][p] * y.c[1][p];
    const double c2 = x.c[2][p] * y.c[0][p] - x.c[0][p] * y.c[2][p];
    const double c3 = x.c[0][p] * y.c[1][p] - x.c[1][p] * y.c[0][p];
    r.v[p] = b.c[0][p] * c1 + b.c[1][p] * c2 + b.c[2][p] * c3;
  }
  return r;
}

ScalarField sqrt_det(const MetricField& g) {
  ScalarField r(g.grid);
  for (std::size_t p = 0; p < r.v.size(); ++p) {
    const double det = det3(load(g, p));
    if (!(det > 0.0)) throw_singular(g.grid, p);
    r.v[p] = std::sqrt(det);
  }
  return r;
}

KForm volume_form(const MetricField& g) {
  KForm r(g.grid, 3);
  ScalarField s = sqrt_det(g);
  r.c[0] = std::move(s.v);
  return r;
}

ScalarField metric_dot(const MetricField& g, const VectorField& x,
                       const VectorField& y) {
  check_same_grid(g.grid, x.grid, "metric_dot");
  ScalarField r(g.grid);
  for (std::size_t p = 0; p < r.v.size(); ++p) {
    const Sym3 m = load(g, p);
    r.v[p] = m.a11 * x.c[0][p] * y.c[0][p] + m.a22 * x.c[1][p] * y.c[1][p] +
             m.a33 * x.c[2][p] * y.c[2][p] +
             m.a12 * (x.c[0][p] * y.c[1][p] + x.c[1][p] * y.c[0][p]) +
             m.a13 * (x.c[0][p] * y.c[2][p] + x.c[2][p] * y.c[0][p]) +
             m.a23 * (x.c[1][p] * y.c[2][p] + x.c[2][p] * y.c[1][p]);
  }
  return r;
}

}  // namespace gvlab
