#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gvlab/geometry.hpp"

using namespace gvlab;

namespace {

MetricField euclidean_metric(const ChartGrid& g) {
  MetricField m(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    m.g[0][p] = 1.0;
    m.g[3][p] = 1.0;
    m.g[5][p] = 1.0;
  }
  return m;
}

MetricField smooth_metric(const ChartGrid& g) {
  MetricField m(g);
  ScalarField u = make_scalar(g, [](double x, double y, double z) {
    return 0.2 * std::sin(x + y) + 0.1 * std::cos(z);
  });
  for (std::size_t p = 0; p < g.size(); ++p) {
    m.g[0][p] = 1.0 + 0.3 * u.v[p];
    m.g[1][p] = 0.15 * u.v[p];
    m.g[2][p] = 0.1 * u.v[p];
    m.g[3][p] = 1.0 - 0.2 * u.v[p];
    m.g[4][p] = 0.05 * u.v[p];
    m.g[5][p] = 1.0 + 0.25 * u.v[p];
  }
  return m;
}

DistributionPair planar_pair(const ChartGrid& g) {
  DistributionPair dp;
  dp.omega = make_one_form(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  dp.T = make_vector(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  return dp;
}

DistributionPair contact_t3_pair(const ChartGrid& g) {
  DistributionPair dp;
  dp.omega = make_one_form(g, [](double, double, double z) {
    return std::array<double, 3>{std::cos(z), -std::sin(z), 0.0};
  });
  dp.T = make_vector(g, [](double, double, double z) {
    return std::array<double, 3>{std::cos(z), -std::sin(z), 0.0};
  });
  return dp;
}

}  // namespace

TEST_CASE("christoffel: Euclidean metric gives zero") {
  ChartGrid g = torus_grid(8);
  ChristoffelField gam = christoffel(euclidean_metric(g));
  for (const auto& comp : gam.G) CHECK(max_abs(comp) == 0.0);
}

TEST_CASE("christoffel: diag(1,1,e^{2x1}) closed form") {
  ChartGrid g = bounded_grid({24, 8, 8}, {0, 0, 0}, {1, 1, 1});
  MetricField m = euclidean_metric(g);
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k)
        m.g[5][g.index(i, j, k)] = std::exp(2.0 * g.coord(0, i));
  ChristoffelField gam = christoffel(m);
  double err = 0.0, err2 = 0.0;
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        const std::size_t p = g.index(i, j, k);
        // Gamma^3_{13} = 1, Gamma^1_{33} = -e^{2x1}
        err = std::max(err, std::fabs(gam.at(p, 2, 0, 2) - 1.0));
        err2 = std::max(
            err2, std::fabs(gam.at(p, 0, 2, 2) + std::exp(2 * g.coord(0, i))));
      }
  CHECK(err < 5e-5);
  CHECK(err2 < 3e-4);
}

TEST_CASE("christoffel: metric compatibility is exact algebra") {
  ChartGrid g = torus_grid(12);
  MetricField m = smooth_metric(g);
  ChristoffelField gam = christoffel(m);
  // d_k g_{ij} = Gamma^l_{ki} g_{lj} + Gamma^l_{kj} g_{il}, with the same
  // stencil derivative on the left.
  double err = 0.0;
  for (int kk = 0; kk < 3; ++kk)
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        ScalarField gij(g);
        gij.v = m.g[MetricField::sym_index(i, j)];
        ScalarField d = partial_derivative(gij, kk + 1);
        for (std::size_t p = 0; p < g.size(); ++p) {
          double rhs = 0.0;
          for (int l = 0; l < 3; ++l)
            rhs += gam.at(p, l, kk, i) * m.at(p, l, j) +
                   gam.at(p, l, kk, j) * m.at(p, i, l);
          err = std::max(err, std::fabs(d.v[p] - rhs));
        }
      }
  CHECK(err < 1e-12);
}

TEST_CASE("covariant_derivative: flat oracle and torsion-freeness") {
  ChartGrid g = torus_grid(24);
  MetricField e = euclidean_metric(g);
  ChristoffelField gam = christoffel(e);

  VectorField w = make_vector(g, [](double, double, double z) {
    return std::array<double, 3>{std::sin(z), 0.0, 0.0};
  });
  VectorField d3 = make_vector(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  VectorField dv = covariant_derivative(gam, d3, w);
  double err = 0.0;
  for (int i = 0; i < g.n[2]; ++i) {}
  ScalarField exact =
      make_scalar(g, [](double, double, double z) { return std::cos(z); });
  for (std::size_t p = 0; p < g.size(); ++p)
    err = std::max(err, std::fabs(dv.c[0][p] - exact.v[p]));
  CHECK(err < 5e-4);
  CHECK(max_abs(dv.c[1]) == 0.0);
  CHECK(max_abs(dv.c[2]) == 0.0);

  // nabla_Z W - nabla_W Z = [Z, W] exactly (Gamma symmetric).
  MetricField m = smooth_metric(g);
  ChristoffelField gams = christoffel(m);
  VectorField z = make_vector(g, [](double x, double y, double) {
    return std::array<double, 3>{std::cos(y), 0.3 * std::sin(x), 0.5};
  });
  VectorField u = make_vector(g, [](double x, double, double zc) {
    return std::array<double, 3>{0.2, std::sin(x + zc), std::cos(zc)};
  });
  VectorField lhs = covariant_derivative(gams, z, u);
  VectorField rhs = covariant_derivative(gams, u, z);
  VectorField br = bracket(z, u);
  double terr = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t p = 0; p < g.size(); ++p)
      terr = std::max(terr,
                      std::fabs(lhs.c[c][p] - rhs.c[c][p] - br.c[c][p]));
  CHECK(terr < 1e-12);
}

TEST_CASE("divergence: closed forms and flat fields") {
  ChartGrid g = torus_grid(24);
  MetricField e = euclidean_metric(g);
  VectorField cst = make_vector(g, [](double, double, double) {
    return std::array<double, 3>{0.4, -0.2, 1.0};
  });
  CHECK(max_abs(divergence(e, cst)) < 1e-15);
  VectorField z = make_vector(g, [](double x, double, double) {
    return std::array<double, 3>{std::sin(x), 0.0, 0.0};
  });
  ScalarField d = divergence(e, z);
  ScalarField exact =
      make_scalar(g, [](double x, double, double) { return std::cos(x); });
  double err = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p)
    err = std::max(err, std::fabs(d.v[p] - exact.v[p]));
  CHECK(err < 5e-4);
}

TEST_CASE("build_compatible_metric: foliation with euclidean seed is flat") {
  ChartGrid g = torus_grid(8);
  CompatiblePair cp =
      build_compatible_metric(planar_pair(g), MetricSeed{});
  cp.validate();
  MetricField e = euclidean_metric(g);
  for (int s = 0; s < 6; ++s)
    for (std::size_t p = 0; p < g.size(); ++p)
      CHECK(cp.g.g[s][p] == doctest::Approx(e.g[s][p]).epsilon(1e-15));
}

TEST_CASE("build_compatible_metric: invariants for contact pair, both seeds") {
  ChartGrid g = torus_grid(16);
  DistributionPair dp = contact_t3_pair(g);
  CompatiblePair a = build_compatible_metric(dp, MetricSeed{});
  CHECK(a.compatibility_defect() < 1e-12);
  CompatiblePair b = build_compatible_metric(
      dp, MetricSeed{MetricSeed::Kind::perturbed, 0.2});
  CHECK(b.compatibility_defect() < 1e-12);
  // Distinct metrics
  double diff = 0.0;
  for (int s = 0; s < 6; ++s)
    for (std::size_t p = 0; p < g.size(); ++p)
      diff = std::max(diff, std::fabs(a.g.g[s][p] - b.g.g[s][p]));
  CHECK(diff > 0.01);
}

TEST_CASE("build_compatible_metric: destructive amplitude rejected") {
  ChartGrid g = torus_grid(8);
  CHECK_THROWS_AS((void)build_compatible_metric(
                      planar_pair(g), MetricSeed{MetricSeed::Kind::perturbed, 5.0}),
                  std::domain_error);
}

TEST_CASE("frenet: flat T = d3 is geodesic, mask empty") {
  ChartGrid g = torus_grid(12);
  CompatiblePair cp = build_compatible_metric(planar_pair(g), MetricSeed{});
  FrenetData fd = frenet(cp, 1e-8);
  CHECK(max_abs(fd.k) == 0.0);
  CHECK(fd.mask_fraction() == 0.0);
}

TEST_CASE("frenet: contact pair on T3 has geodesic Reeb curves") {
  ChartGrid g = torus_grid(16);
  CompatiblePair cp =
      build_compatible_metric(contact_t3_pair(g), MetricSeed{});
  FrenetData fd = frenet(cp, 1e-8);
  CHECK(max_abs(fd.k) < 1e-13);
  CHECK(fd.mask_fraction() == 0.0);
}

TEST_CASE("frenet: tilted unit field against symbolic oracle") {
  // T = (d3 + eps cos(x1) d2) / norm in the flat metric; omega = flat(T).
  // With the euclidean seed the compatible metric is flat, and the Frenet
  // data of T-curves has a closed form via nabla_T T = (T . grad) T.
  ChartGrid g = torus_grid(32);
  const double eps = 0.3;
  auto norm = [eps](double x) {
    return std::sqrt(1.0 + eps * eps * std::cos(x) * std::cos(x));
  };
  DistributionPair dp;
  dp.T = make_vector(g, [&](double x, double, double) {
    return std::array<double, 3>{0.0, eps * std::cos(x) / norm(x),
                                 1.0 / norm(x)};
  });
  dp.omega = make_one_form(g, [&](double x, double, double) {
    return std::array<double, 3>{0.0, eps * std::cos(x) / norm(x),
                                 1.0 / norm(x)};
  });
  CompatiblePair cp{dp, euclidean_metric(g)};
  cp.validate(1e-12);
  FrenetData fd = frenet(cp, 1e-8);
  // T has no d1 component and no dependence on x2, x3: (T.grad)T = 0.
  // The field is geodesic; curvature vanishes identically.
  CHECK(max_abs(fd.k) < 1e-13);
}

TEST_CASE("frenet: residuals of the Frenet equations on a curved scenario") {
  // omega = dz + a sin(z) dx1 with compatible metric: k != 0 a.e.
  ChartGrid g = torus_grid(32);
  const double a = 0.3;
  DistributionPair dp;
  dp.omega = make_one_form(g, [a](double, double, double z) {
    return std::array<double, 3>{a * std::sin(z), 0.0, 1.0};
  });
  dp.T = make_vector(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  CompatiblePair cp = build_compatible_metric(dp, MetricSeed{});
  FrenetData fd = frenet(cp, 1e-4);
  CHECK(fd.mask_fraction() > 0.9);

  ChristoffelField gam = christoffel(cp.g);
  auto mask = erode_mask(g, fd.valid, 2);

  // Orthonormality and orientation on the mask.
  ScalarField tn = metric_dot(cp.g, cp.dp.T, fd.N);
  ScalarField nn = metric_dot(cp.g, fd.N, fd.N);
  ScalarField bb = metric_dot(cp.g, fd.B, fd.B);
  ScalarField nb = metric_dot(cp.g, fd.N, fd.B);
  ScalarField orient = volume_on_triple(cp.g, cp.dp.T, fd.N, fd.B);
  double e1 = 0, e2 = 0, e3 = 0, e4 = 0, e5 = 0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!mask[p]) continue;
    e1 = std::max(e1, std::fabs(tn.v[p]));
    e2 = std::max(e2, std::fabs(nn.v[p] - 1.0));
    e3 = std::max(e3, std::fabs(bb.v[p] - 1.0));
    e4 = std::max(e4, std::fabs(nb.v[p]));
    e5 = std::max(e5, std::fabs(orient.v[p] - 1.0));
  }
  CHECK(e1 < 1e-12);
  CHECK(e2 < 1e-12);
  CHECK(e3 < 1e-12);
  CHECK(e4 < 1e-12);
  CHECK(e5 < 1e-12);

  // Frenet residuals: nabla_T T - kN, nabla_T N + kT - tau B,
  // nabla_T B + tau N.
  VectorField dtt = covariant_derivative(gam, cp.dp.T, cp.dp.T);
  VectorField dtn = covariant_derivative(gam, cp.dp.T, fd.N);
  VectorField dtb = covariant_derivative(gam, cp.dp.T, fd.B);
  double r1 = 0, r2 = 0, r3 = 0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!mask[p]) continue;
    for (int c = 0; c < 3; ++c) {
      r1 = std::max(r1, std::fabs(dtt.c[c][p] - fd.k.v[p] * fd.N.c[c][p]));
      r2 = std::max(r2, std::fabs(dtn.c[c][p] + fd.k.v[p] * cp.dp.T.c[c][p] -
                                  fd.tau.v[p] * fd.B.c[c][p]));
      r3 = std::max(r3, std::fabs(dtb.c[c][p] + fd.tau.v[p] * fd.N.c[c][p]));
    }
  }
  CHECK(r1 < 1e-10);
  CHECK(r2 < 5e-4);
  CHECK(r3 < 5e-4);

  // k = g([N,T], T) within truncation on the mask.
  ScalarField kor = metric_dot(cp.g, bracket(fd.N, cp.dp.T), cp.dp.T);
  double rk = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p)
    if (mask[p]) rk = std::max(rk, std::fabs(kor.v[p] - fd.k.v[p]));
  CHECK(rk < 5e-4);
}

TEST_CASE("second_fundamental: planar foliation is totally geodesic") {
  ChartGrid g = torus_grid(12);
  CompatiblePair cp = build_compatible_metric(planar_pair(g), MetricSeed{});
  FrenetData fd = frenet(cp, 1e-8);
  SecondFundamentalData s = second_fundamental(cp, fd);
  CHECK(max_abs(s.h_nn) < 1e-13);
  CHECK(max_abs(s.h_nb) < 1e-13);
  CHECK(max_abs(s.h_bn) < 1e-13);
  CHECK(max_abs(s.h_bb) < 1e-13);
  CHECK(max_abs(s.tcal) < 1e-13);
}

TEST_CASE("second_fundamental: T_{N,B} equals the bracket oracle") {
  ChartGrid g = torus_grid(24);
  CompatiblePair cp =
      build_compatible_metric(contact_t3_pair(g), MetricSeed{});
  FrenetData fd = frenet(cp, 1e-8);
  VectorField x, y;
  frame_or_aux(cp, fd, x, y);
  SecondFundamentalData s = second_fundamental(cp, x, y);
  ScalarField tor = metric_dot(cp.g, bracket(x, y), cp.dp.T);
  double err = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p)
    err = std::max(err, std::fabs(0.5 * tor.v[p] - s.tcal.v[p]));
  CHECK(err < 1e-4);
  // Non-integrability: on the T3 contact structure T_{N,B} = -1/2. The
  // stencil applied to unit-frequency trig rescales by a constant, so the
  // computed field is constant to machine precision and near -1/2.
  double lo = 1e30, hi = -1e30;
  for (std::size_t p = 0; p < g.size(); ++p) {
    lo = std::min(lo, s.tcal.v[p]);
    hi = std::max(hi, s.tcal.v[p]);
  }
  CHECK(hi - lo < 1e-12);
  CHECK(std::fabs(0.5 * (hi + lo) + 0.5) < 1e-3);
}

TEST_CASE("divergence of T equals -sigma1 for compatible pairs") {
  ChartGrid g = torus_grid(32);
  const double a = 0.25;
  DistributionPair dp;
  dp.omega = make_one_form(g, [a](double x, double y, double z) {
    return std::array<double, 3>{a * std::sin(z) * std::cos(y),
                                 a * std::cos(z + x), 1.0};
  });
  dp.T = make_vector(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  CompatiblePair cp = build_compatible_metric(dp, MetricSeed{});
  FrenetData fd = frenet(cp, 1e-6);
  SecondFundamentalData s = second_fundamental(cp, fd);
  ScalarField div = divergence(cp.g, cp.dp.T);
  auto mask = erode_mask(g, fd.valid, 2);
  double err = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p)
    if (mask[p]) err = std::max(err, std::fabs(div.v[p] + s.sigma1.v[p]));
  CHECK(err < 2e-2);
}

TEST_CASE("erode_mask shrinks by the requested layers") {
  ChartGrid g = torus_grid(8);
  std::vector<std::uint8_t> m(g.size(), 1);
  m[g.index(4, 4, 4)] = 0;
  auto e = erode_mask(g, m, 1);
  CHECK(e[g.index(4, 4, 3)] == 0);
  CHECK(e[g.index(3, 4, 4)] == 0);
  CHECK(e[g.index(4, 4, 4)] == 0);
  CHECK(e[g.index(2, 4, 4)] == 1);
}
