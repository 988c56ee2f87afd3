#include "gvlab/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "gvlab/kernels.hpp"

namespace gvlab {

namespace {

std::vector<double> deriv(const ChartGrid& g, const std::vector<double>& in,
                          int axis0) {
  std::vector<double> out(in.size());
  derivative_axis(g, in.data(), out.data(), axis0);
  return out;
}

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
  return {(m.a22 * m.a33 - m.a23 * m.a23) * id,
          (m.a13 * m.a23 - m.a12 * m.a33) * id,
          (m.a12 * m.a23 - m.a13 * m.a22) * id,
          (m.a11 * m.a33 - m.a13 * m.a13) * id,
          (m.a12 * m.a13 - m.a11 * m.a23) * id,
          (m.a11 * m.a22 - m.a12 * m.a12) * id};
}

bool positive_definite(const Sym3& m) {
  return m.a11 > 0.0 && (m.a11 * m.a22 - m.a12 * m.a12) > 0.0 && det3(m) > 0.0;
}

}  // namespace

ChristoffelField christoffel(const MetricField& g) {
  const ChartGrid& grid = g.grid;
  const std::size_t n = grid.size();
  // d_a g_{ij} for the six packed components and three axes.
  std::array<std::array<std::vector<double>, 6>, 3> dg;
  for (int a = 0; a < 3; ++a)
    for (int s = 0; s < 6; ++s) dg[a][s] = deriv(grid, g.g[s], a);

  ChristoffelField gam(grid);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ps = 0; ps < static_cast<std::ptrdiff_t>(n); ++ps) {
    const std::size_t p = static_cast<std::size_t>(ps);
    const Sym3 m = load(g, p);
    const double det = det3(m);
    if (!positive_definite(m)) continue;  // validated separately
    const Sym3 mi = inv3(m, det);
    const double ginv[3][3] = {{mi.a11, mi.a12, mi.a13},
                               {mi.a12, mi.a22, mi.a23},
                               {mi.a13, mi.a23, mi.a33}};
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        double low[3];
        for (int l = 0; l < 3; ++l) {
          const int s_jl = MetricField::sym_index(j, l);
          const int s_il = MetricField::sym_index(i, l);
          const int s_ij = MetricField::sym_index(i, j);
          low[l] = 0.5 * (dg[i][s_jl][p] + dg[j][s_il][p] - dg[l][s_ij][p]);
        }
        for (int k = 0; k < 3; ++k) {
          double v = 0.0;
          for (int l = 0; l < 3; ++l) v += ginv[k][l] * low[l];
          gam.G[k * 6 + MetricField::sym_index(i, j)][p] = v;
        }
      }
  }
  // Reject indefinite metrics after the parallel loop so the error carries
  // the first offending location.
  for (std::size_t p = 0; p < n; ++p)
    if (!positive_definite(load(g, p)))
      (void)sqrt_det(g);  // throws with location
  return gam;
}

VectorField covariant_derivative(const ChristoffelField& gam,
                                 const VectorField& z, const VectorField& w) {
  check_same_grid(gam.grid, z.grid, "covariant_derivative");
  check_same_grid(gam.grid, w.grid, "covariant_derivative");
  const ChartGrid& grid = gam.grid;
  const std::size_t n = grid.size();
  std::array<std::array<std::vector<double>, 3>, 3> dw;  // dw[a][k] = d_a W^k
  for (int a = 0; a < 3; ++a)
    for (int k = 0; k < 3; ++k) dw[a][k] = deriv(grid, w.c[k], a);
  VectorField r(grid);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ps = 0; ps < static_cast<std::ptrdiff_t>(n); ++ps) {
    const std::size_t p = static_cast<std::size_t>(ps);
    for (int k = 0; k < 3; ++k) {
      double v = 0.0;
      for (int i = 0; i < 3; ++i) {
        v += z.c[i][p] * dw[i][k][p];
        for (int j = 0; j < 3; ++j)
          v += z.c[i][p] * w.c[j][p] * gam.at(p, k, i, j);
      }
      r.c[k][p] = v;
    }
  }
  return r;
}

ScalarField divergence(const MetricField& g, const VectorField& z) {
  check_same_grid(g.grid, z.grid, "divergence");
  const ChartGrid& grid = g.grid;
  ScalarField s = sqrt_det(g);
  ScalarField r(grid);
  for (int a = 0; a < 3; ++a) {
    std::vector<double> w(grid.size());
    for (std::size_t p = 0; p < w.size(); ++p) w[p] = s.v[p] * z.c[a][p];
    auto dw = deriv(grid, w, a);
    for (std::size_t p = 0; p < w.size(); ++p) r.v[p] += dw[p];
  }
  for (std::size_t p = 0; p < r.v.size(); ++p) r.v[p] /= s.v[p];
  return r;
}

double DistributionPair::pairing_defect() const {
  ScalarField w = eval_one_form(omega, T);
  double m = 0.0;
  for (double x : w.v) m = std::max(m, std::fabs(x - 1.0));
  return m;
}

void DistributionPair::validate(double tol) const {
  if (omega.degree != 1)
    throw std::invalid_argument("DistributionPair: omega must be a 1-form");
  check_same_grid(omega.grid, T.grid, "DistributionPair");
  if (pairing_defect() > tol)
    throw std::invalid_argument("DistributionPair: omega(T) = 1 violated");
}

double CompatiblePair::compatibility_defect() const {
  KForm tf = flat(g, dp.T);
  double m = max_abs(form_difference(tf, dp.omega));
  ScalarField tt = metric_dot(g, dp.T, dp.T);
  for (double x : tt.v) m = std::max(m, std::fabs(x - 1.0));
  return m;
}

void CompatiblePair::validate(double tol) const {
  dp.validate(tol);
  if (compatibility_defect() > tol)
    throw std::invalid_argument(
        "CompatiblePair: flat(T) = omega or g(T,T) = 1 violated");
}

CompatiblePair build_compatible_metric(const DistributionPair& dp,
                                       const MetricSeed& seed) {
  dp.validate();
  const ChartGrid& grid = dp.grid();
  const std::size_t n = grid.size();
  MetricField g(grid);

  // Seed metric s_ij: Euclidean plus an optional smooth perturbation.
  auto seed_at = [&](double x, double y, double z, double out[6]) {
    out[0] = 1.0; out[1] = 0.0; out[2] = 0.0;
    out[3] = 1.0; out[4] = 0.0; out[5] = 1.0;
    if (seed.kind == MetricSeed::Kind::perturbed) {
      const double a = seed.amplitude;
      out[0] += a * std::sin(x + y);
      out[1] += 0.5 * a * std::cos(y + z);
      out[2] += 0.5 * a * std::sin(x + z);
      out[3] += a * std::cos(x - z);
      out[4] += 0.5 * a * std::sin(y - x);
      out[5] += a * std::cos(y - 0.7);
    }
  };

  for (int i = 0; i < grid.n[0]; ++i)
    for (int j = 0; j < grid.n[1]; ++j)
      for (int k = 0; k < grid.n[2]; ++k) {
        const std::size_t p = grid.index(i, j, k);
        double s[6];
        seed_at(grid.coord(0, i), grid.coord(1, j), grid.coord(2, k), s);
        const double sm[3][3] = {{s[0], s[1], s[2]},
                                 {s[1], s[3], s[4]},
                                 {s[2], s[4], s[5]}};
        const double om[3] = {dp.omega.c[0][p], dp.omega.c[1][p],
                              dp.omega.c[2][p]};
        const double tv[3] = {dp.T.c[0][p], dp.T.c[1][p], dp.T.c[2][p]};
        // Projection onto ker(omega) along T: pi^k_i = delta^k_i - T^k om_i.
        double pi[3][3];
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            pi[a][b] = (a == b ? 1.0 : 0.0) - tv[a] * om[b];
        for (int a = 0; a < 3; ++a)
          for (int b = a; b < 3; ++b) {
            double v = om[a] * om[b];
            for (int c = 0; c < 3; ++c)
              for (int d = 0; d < 3; ++d)
                v += sm[c][d] * pi[c][a] * pi[d][b];
            g.g[MetricField::sym_index(a, b)][p] = v;
          }
      }

  for (std::size_t p = 0; p < n; ++p)
    if (!positive_definite(load(g, p)))
      throw std::domain_error(
          "build_compatible_metric: perturbation amplitude breaks positive "
          "definiteness");
  return CompatiblePair{dp, std::move(g)};
}

double FrenetData::mask_fraction() const {
  if (valid.empty()) return 0.0;
  std::size_t c = 0;
  for (auto m : valid) c += (m != 0);
  return static_cast<double>(c) / static_cast<double>(valid.size());
}

FrenetData frenet(const CompatiblePair& cp, double k_min) {
  const ChartGrid& grid = cp.grid();
  const std::size_t n = grid.size();
  ChristoffelField gam = christoffel(cp.g);
  VectorField a = covariant_derivative(gam, cp.dp.T, cp.dp.T);  // nabla_T T
  FrenetData fd;
  fd.k = ScalarField(grid);
  fd.tau = ScalarField(grid);
  fd.N = VectorField(grid);
  fd.B = VectorField(grid);
  fd.valid.assign(n, 0);
  fd.k_min = k_min;

  ScalarField aa = metric_dot(cp.g, a, a);
  for (std::size_t p = 0; p < n; ++p)
    fd.k.v[p] = std::sqrt(std::max(0.0, aa.v[p]));

  for (std::size_t p = 0; p < n; ++p) {
    if (fd.k.v[p] >= k_min) {
      fd.valid[p] = 1;
      const double ik = 1.0 / fd.k.v[p];
      for (int c = 0; c < 3; ++c) fd.N.c[c][p] = a.c[c][p] * ik;
    }
  }

  // B = sharp(i_N i_T dV_g): the unique unit field completing (T,N) to a
  // positively oriented g-orthonormal triple.
  KForm dv = volume_form(cp.g);
  KForm bflat = interior_product(fd.N, interior_product(cp.dp.T, dv));
  VectorField b = sharp(cp.g, bflat);
  for (std::size_t p = 0; p < n; ++p)
    if (fd.valid[p])
      for (int c = 0; c < 3; ++c) fd.B.c[c][p] = b.c[c][p];

  VectorField dn = covariant_derivative(gam, cp.dp.T, fd.N);
  ScalarField tau = metric_dot(cp.g, dn, fd.B);
  for (std::size_t p = 0; p < n; ++p)
    if (fd.valid[p]) fd.tau.v[p] = tau.v[p];
  return fd;
}

std::vector<std::uint8_t> erode_mask(const ChartGrid& g,
                                     const std::vector<std::uint8_t>& mask,
                                     int layers) {
  std::vector<std::uint8_t> out = mask;
  std::vector<std::uint8_t> cur = mask;
  for (int pass = 0; pass < layers; ++pass) {
    for (int i = 0; i < g.n[0]; ++i)
      for (int j = 0; j < g.n[1]; ++j)
        for (int k = 0; k < g.n[2]; ++k) {
          const std::size_t p = g.index(i, j, k);
          if (!cur[p]) {
            out[p] = 0;
            continue;
          }
          bool ok = true;
          const int idx[3] = {i, j, k};
          for (int a = 0; a < 3 && ok; ++a)
            for (int d = -1; d <= 1 && ok; d += 2) {
              int q = idx[a] + d;
              if (g.topo[a] == Topology::periodic)
                q = (q + g.n[a]) % g.n[a];
              else if (q < 0 || q >= g.n[a]) {
                ok = false;  // bounded boundary neighbours the outside
                break;
              }
              int ii = i, jj = j, kk = k;
              (a == 0 ? ii : a == 1 ? jj : kk) = q;
              if (!cur[g.index(ii, jj, kk)]) ok = false;
            }
          out[p] = ok ? 1 : 0;
        }
    cur = out;
  }
  return out;
}

void aux_frame(const CompatiblePair& cp, VectorField& e1, VectorField& e2) {
  const ChartGrid& grid = cp.grid();
  const std::size_t n = grid.size();
  // Axis whose omega-component is smallest in the max norm over the grid.
  double mx[3] = {0.0, 0.0, 0.0};
  for (int c = 0; c < 3; ++c) mx[c] = max_abs(cp.dp.omega.c[c]);
  int axis = 0;
  for (int c = 1; c < 3; ++c)
    if (mx[c] < mx[axis]) axis = c;

  e1 = VectorField(grid);
  for (std::size_t p = 0; p < n; ++p) {
    double v[3];
    const double oma = cp.dp.omega.c[axis][p];
    for (int c = 0; c < 3; ++c)
      v[c] = (c == axis ? 1.0 : 0.0) - oma * cp.dp.T.c[c][p];
    for (int c = 0; c < 3; ++c) e1.c[c][p] = v[c];
  }
  ScalarField nn = metric_dot(cp.g, e1, e1);
  for (std::size_t p = 0; p < n; ++p) {
    const double inv = 1.0 / std::sqrt(nn.v[p]);
    for (int c = 0; c < 3; ++c) e1.c[c][p] *= inv;
  }
  KForm dv = volume_form(cp.g);
  KForm e2flat = interior_product(e1, interior_product(cp.dp.T, dv));
  e2 = sharp(cp.g, e2flat);
}

void frame_or_aux(const CompatiblePair& cp, const FrenetData& fd,
                  VectorField& x, VectorField& y) {
  VectorField e1, e2;
  aux_frame(cp, e1, e2);
  x = fd.N;
  y = fd.B;
  const std::size_t n = cp.grid().size();
  for (std::size_t p = 0; p < n; ++p)
    if (!fd.valid[p])
      for (int c = 0; c < 3; ++c) {
        x.c[c][p] = e1.c[c][p];
        y.c[c][p] = e2.c[c][p];
      }
}

SecondFundamentalData second_fundamental(const CompatiblePair& cp,
                                         const VectorField& x,
                                         const VectorField& y) {
  ChristoffelField gam = christoffel(cp.g);
  const VectorField& t = cp.dp.T;
  SecondFundamentalData s;
  s.h_nn = metric_dot(cp.g, covariant_derivative(gam, x, x), t);
  s.h_nb = metric_dot(cp.g, covariant_derivative(gam, x, y), t);
  s.h_bn = metric_dot(cp.g, covariant_derivative(gam, y, x), t);
  s.h_bb = metric_dot(cp.g, covariant_derivative(gam, y, y), t);
  s.tcal = ScalarField(cp.grid());
  s.sigma1 = ScalarField(cp.grid());
  for (std::size_t p = 0; p < s.tcal.v.size(); ++p) {
    s.tcal.v[p] = 0.5 * (s.h_nb.v[p] - s.h_bn.v[p]);
    s.sigma1.v[p] = s.h_nn.v[p] + s.h_bb.v[p];
  }
  return s;
}

SecondFundamentalData second_fundamental(const CompatiblePair& cp,
                                         const FrenetData& fd) {
  VectorField x, y;
  frame_or_aux(cp, fd, x, y);
  return second_fundamental(cp, x, y);
}

VectorField bracket(const VectorField& z, const VectorField& w) {
  check_same_grid(z.grid, w.grid, "bracket");
  const ChartGrid& grid = z.grid;
  std::array<std::array<std::vector<double>, 3>, 3> dz, dw;
  for (int a = 0; a < 3; ++a)
    for (int k = 0; k < 3; ++k) {
      dz[a][k] = deriv(grid, z.c[k], a);
      dw[a][k] = deriv(grid, w.c[k], a);
    }
  VectorField r(grid);
  for (std::size_t p = 0; p < grid.size(); ++p)
    for (int k = 0; k < 3; ++k) {
      double v = 0.0;
      for (int i = 0; i < 3; ++i)
        v += z.c[i][p] * dw[i][k][p] - w.c[i][p] * dz[i][k][p];
      r.c[k][p] = v;
    }
  return r;
}

ScalarField volume_on_triple(const MetricField& g, const VectorField& x,
                             const VectorField& y, const VectorField& z) {
  ScalarField s = sqrt_det(g);
  ScalarField r(g.grid);
  for (std::size_t p = 0; p < r.v.size(); ++p) {
    const double det =
        x.c[0][p] * (y.c[1][p] * z.c[2][p] - y.c[2][p] * z.c[1][p]) -
        y.c[0][p] * (x.c[1][p] * z.c[2][p] - x.c[2][p] * z.c[1][p]) +
        z.c[0][p] * (x.c[1][p] * y.c[2][p] - x.c[2][p] * y.c[1][p]);
    r.v[p] = s.v[p] * det;
  }
  return r;
}

ScalarField directional_derivative(const VectorField& t,
                                   const ScalarField& f) {
  check_same_grid(t.grid, f.grid, "directional_derivative");
  const ChartGrid& grid = t.grid;
  ScalarField r(grid);
  for (int a = 0; a < 3; ++a) {
    auto df = deriv(grid, f.v, a);
    for (std::size_t p = 0; p < r.v.size(); ++p) r.v[p] += t.c[a][p] * df[p];
  }
  return r;
}

}  // namespace gvlab
