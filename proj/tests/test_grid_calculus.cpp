#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gvlab/calculus.hpp"
#include "gvlab/geometry.hpp"
#include "gvlab/kernels.hpp"

using namespace gvlab;

namespace {

const double kPi = 3.14159265358979323846;

MetricField euclidean_metric(const ChartGrid& g) {
  MetricField m(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    m.g[0][p] = 1.0;
    m.g[3][p] = 1.0;
    m.g[5][p] = 1.0;
  }
  return m;
}

MetricField random_pd_metric(const ChartGrid& g) {
  // Smooth, safely positive definite.
  MetricField m(g);
  ScalarField a = make_scalar(g, [](double x, double y, double z) {
    return 1.0 + 0.3 * std::sin(x + y) + 0.1 * std::cos(z);
  });
  ScalarField b = make_scalar(g, [](double x, double y, double z) {
    return 0.2 * std::cos(x - z) + 0.1 * std::sin(y);
  });
  ScalarField c = make_scalar(g, [](double x, double y, double z) {
    return 1.0 + 0.25 * std::cos(y + z) + 0.1 * std::sin(x);
  });
  for (std::size_t p = 0; p < g.size(); ++p) {
    m.g[0][p] = a.v[p];
    m.g[1][p] = b.v[p] * 0.3;
    m.g[2][p] = b.v[p] * 0.2;
    m.g[3][p] = c.v[p];
    m.g[4][p] = b.v[p] * 0.25;
    m.g[5][p] = 1.0 + 0.2 * std::sin(a.v[p]);
  }
  return m;
}

KForm random_one_form(const ChartGrid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(-0.5, 0.5);
  const double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng);
  const double p1 = amp(rng), p2 = amp(rng), p3 = amp(rng);
  return make_one_form(g, [=](double x, double y, double z) {
    return std::array<double, 3>{a1 * std::sin(y + p1) * std::cos(z),
                                 a2 * std::cos(x + p2) * std::sin(z),
                                 a3 * std::sin(x + y + p3)};
  });
}

}  // namespace

TEST_CASE("partial_derivative: constant field maps to zero") {
  ChartGrid g = torus_grid(16);
  ScalarField f = make_scalar(g, [](double, double, double) { return 3.5; });
  for (int ax = 1; ax <= 3; ++ax)
    CHECK(max_abs(partial_derivative(f, ax)) == 0.0);
}

TEST_CASE("partial_derivative: sin(x1) on periodic axis, 4th order") {
  double prev_err = 0.0;
  for (int n : {16, 32}) {
    ChartGrid g = torus_grid(n);
    ScalarField f =
        make_scalar(g, [](double x, double, double) { return std::sin(x); });
    ScalarField d = partial_derivative(f, 1);
    ScalarField exact =
        make_scalar(g, [](double x, double, double) { return std::cos(x); });
    double err = 0.0;
    for (std::size_t p = 0; p < d.v.size(); ++p)
      err = std::max(err, std::fabs(d.v[p] - exact.v[p]));
    if (n == 16) {
      prev_err = err;
      CHECK(err < 1e-3);
    } else {
      CHECK(prev_err / err > 12.0);  // ~16x for 4th order
      CHECK(err < 1e-4);
    }
  }
}

TEST_CASE("partial_derivative: x3^2 on bounded axis is exact (poly deg <= 4)") {
  ChartGrid g = bounded_grid({8, 8, 24}, {0, 0, 0}, {1, 1, 2});
  ScalarField f =
      make_scalar(g, [](double, double, double z) { return z * z; });
  ScalarField d = partial_derivative(f, 3);
  double err = 0.0;
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k)
        err = std::max(err, std::fabs(d.v[g.index(i, j, k)] -
                                      2.0 * g.coord(2, k)));
  CHECK(err < 1e-12);
}

TEST_CASE("partial_derivative: axis out of range rejected") {
  ChartGrid g = torus_grid(8);
  ScalarField f(g);
  CHECK_THROWS_AS((void)partial_derivative(f, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)partial_derivative(f, 4), std::invalid_argument);
}

TEST_CASE("exterior_d: contact chart omega = dx3 - x2 dx1") {
  // Bounded chart: -x2 is not periodic.
  ChartGrid g = bounded_grid({16, 16, 16}, {-1, -1, -1}, {1, 1, 1});
  KForm omega = make_one_form(g, [](double, double y, double) {
    return std::array<double, 3>{-y, 0.0, 1.0};
  });
  KForm dw = exterior_d(omega);
  // d(omega) = dx1^dx2: components (0,0,1) in the 2-form basis.
  CHECK(max_abs(dw.c[0]) < 1e-13);
  CHECK(max_abs(dw.c[1]) < 1e-13);
  double err = 0.0;
  for (double v : dw.c[2]) err = std::max(err, std::fabs(v - 1.0));
  CHECK(err < 1e-13);
}

TEST_CASE("exterior_d: d(sin(x1) dx2) = cos(x1) dx1^dx2") {
  ChartGrid g = torus_grid(32);
  KForm a = make_one_form(g, [](double x, double, double) {
    return std::array<double, 3>{0.0, std::sin(x), 0.0};
  });
  KForm da = exterior_d(a);
  ScalarField exact =
      make_scalar(g, [](double x, double, double) { return std::cos(x); });
  double err = 0.0;
  for (std::size_t p = 0; p < exact.v.size(); ++p)
    err = std::max(err, std::fabs(da.c[2][p] - exact.v[p]));
  CHECK(err < 1e-4);
  CHECK(max_abs(da.c[0]) < 1e-13);
  CHECK(max_abs(da.c[1]) < 1e-13);
}

TEST_CASE("exterior_d: d(d(alpha)) vanishes to machine precision") {
  for (int deg : {0, 1}) {
    ChartGrid g = torus_grid(16);
    KForm a = deg == 0 ? KForm(g, 0) : random_one_form(g, 7);
    if (deg == 0) {
      ScalarField f = make_scalar(g, [](double x, double y, double z) {
        return std::sin(x) * std::cos(2 * y) + std::sin(z + x);
      });
      a.c[0] = f.v;
    }
    CHECK(max_abs(exterior_d(exterior_d(a))) < 1e-12);
  }
  // Also on a bounded chart (one-sided closures commute across axes).
  ChartGrid g = bounded_grid({12, 12, 12}, {0, 0, 0}, {1, 1, 1});
  ScalarField f = make_scalar(g, [](double x, double y, double z) {
    return std::exp(0.3 * x) * std::sin(y) + z * z * x;
  });
  KForm a(g, 0);
  a.c[0] = f.v;
  CHECK(max_abs(exterior_d(exterior_d(a))) < 1e-10);
}

TEST_CASE("exterior_d: degree-3 input rejected") {
  ChartGrid g = torus_grid(8);
  CHECK_THROWS_AS((void)exterior_d(KForm(g, 3)), std::invalid_argument);
}

TEST_CASE("wedge: contact chart omega ^ d(omega) is the volume form") {
  ChartGrid g = bounded_grid({12, 12, 12}, {-1, -1, -1}, {1, 1, 1});
  KForm omega = make_one_form(g, [](double, double y, double) {
    return std::array<double, 3>{-y, 0.0, 1.0};
  });
  KForm w = wedge(omega, exterior_d(omega));
  double err = 0.0;
  for (double v : w.c[0]) err = std::max(err, std::fabs(v - 1.0));
  CHECK(err < 1e-13);
}

TEST_CASE("wedge: alpha ^ alpha = 0 and graded antisymmetry") {
  ChartGrid g = torus_grid(12);
  KForm a = random_one_form(g, 11), b = random_one_form(g, 13);
  CHECK(max_abs(wedge(a, a)) == 0.0);
  KForm ab = wedge(a, b), ba = wedge(b, a);
  axpy(ab, 1.0, ba);  // a^b + b^a = 0 for 1-forms
  CHECK(max_abs(ab) < 1e-15);
  // 1-form ^ 2-form commutes.
  KForm da = exterior_d(a);
  KForm x = wedge(b, da), y = wedge(da, b);
  CHECK(max_abs(form_difference(x, y)) == 0.0);
}

TEST_CASE("wedge: basis orientation dx1 ^ (dx2^dx3) = +vol") {
  ChartGrid g = torus_grid(8);
  KForm a(g, 1), b(g, 2);
  for (auto& v : a.c[0]) v = 1.0;
  for (auto& v : b.c[0]) v = 1.0;
  KForm w = wedge(a, b);
  for (double v : w.c[0]) CHECK(v == 1.0);
  CHECK_THROWS_AS((void)wedge(b, b), std::invalid_argument);
}

TEST_CASE("interior_product: paper values on the contact chart") {
  ChartGrid g = bounded_grid({12, 12, 12}, {-1, -1, -1}, {1, 1, 1});
  // X1 = d1 + x2 d3, d(omega) = dx1^dx2 -> i_X1 d(omega) = dx2.
  VectorField x1 = make_vector(g, [](double, double y, double) {
    return std::array<double, 3>{1.0, 0.0, y};
  });
  KForm dw(g, 2);
  for (auto& v : dw.c[2]) v = 1.0;
  KForm r = interior_product(x1, dw);
  CHECK(max_abs(r.c[0]) < 1e-15);
  double err = 0.0;
  for (double v : r.c[1]) err = std::max(err, std::fabs(v - 1.0));
  CHECK(err < 1e-15);
  CHECK(max_abs(r.c[2]) < 1e-15);

  // i_{d3} (dx1^dx2) = 0.
  VectorField d3 = make_vector(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  CHECK(max_abs(interior_product(d3, dw)) == 0.0);
}

TEST_CASE("interior_product: i_Z i_Z = 0 and contraction oracle") {
  ChartGrid g = torus_grid(12);
  VectorField z = make_vector(g, [](double x, double y, double z) {
    return std::array<double, 3>{std::sin(y), std::cos(z + x), 0.7};
  });
  KForm beta = exterior_d(random_one_form(g, 3));
  CHECK(max_abs(interior_product(z, interior_product(z, beta))) < 1e-15);

  // dw(Z, .) against the direct tensor contraction, on a random vector W.
  VectorField w = make_vector(g, [](double x, double, double zc) {
    return std::array<double, 3>{0.3, std::sin(x + zc), -0.2};
  });
  ScalarField via_ip = eval_one_form(interior_product(z, beta), w);
  ScalarField direct = eval_two_form(beta, z, w);
  double err = 0.0;
  for (std::size_t p = 0; p < via_ip.v.size(); ++p)
    err = std::max(err, std::fabs(via_ip.v[p] - direct.v[p]));
  CHECK(err < 1e-14);
  CHECK_THROWS_AS((void)interior_product(z, KForm(g, 0)),
                  std::invalid_argument);
}

TEST_CASE("lie_derivative: constants, closed-form oracle, Cartan identity") {
  ChartGrid g = torus_grid(24);
  VectorField d3 = make_vector(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  KForm dx1(g, 1);
  for (auto& v : dx1.c[0]) v = 1.0;
  CHECK(max_abs(lie_derivative(d3, dx1)) == 0.0);

  // L_{d3}(sin(x3) dx1) = cos(x3) dx1.
  KForm a = make_one_form(g, [](double, double, double z) {
    return std::array<double, 3>{std::sin(z), 0.0, 0.0};
  });
  KForm la = lie_derivative(d3, a);
  ScalarField exact =
      make_scalar(g, [](double, double, double z) { return std::cos(z); });
  double err = 0.0;
  for (std::size_t p = 0; p < exact.v.size(); ++p)
    err = std::max(err, std::fabs(la.c[0][p] - exact.v[p]));
  CHECK(err < 5e-4);
  CHECK(max_abs(la.c[1]) < 1e-13);
  CHECK(max_abs(la.c[2]) < 1e-13);

  // L_Z d = d L_Z up to truncation.
  VectorField z = make_vector(g, [](double x, double y, double) {
    return std::array<double, 3>{std::cos(y), 0.4, std::sin(x)};
  });
  KForm b = random_one_form(g, 5);
  KForm lhs = lie_derivative(z, exterior_d(b));
  KForm rhs = exterior_d(lie_derivative(z, b));
  CHECK(max_abs(form_difference(lhs, rhs)) < 5e-4);
}

TEST_CASE("lie_derivative: degree-0 and degree-3 forms") {
  ChartGrid g = torus_grid(24);
  VectorField z = make_vector(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  KForm f(g, 0);
  ScalarField s =
      make_scalar(g, [](double, double, double zc) { return std::sin(zc); });
  f.c[0] = s.v;
  KForm lf = lie_derivative(z, f);
  ScalarField c =
      make_scalar(g, [](double, double, double zc) { return std::cos(zc); });
  double err = 0.0;
  for (std::size_t p = 0; p < c.v.size(); ++p)
    err = std::max(err, std::fabs(lf.c[0][p] - c.v[p]));
  CHECK(err < 5e-4);

  KForm vol(g, 3);
  vol.c[0] = s.v;
  KForm lv = lie_derivative(z, vol);
  err = 0.0;
  for (std::size_t p = 0; p < c.v.size(); ++p)
    err = std::max(err, std::fabs(lv.c[0][p] - c.v[p]));
  CHECK(err < 5e-4);
}

TEST_CASE("hodge_star: Euclidean identities") {
  ChartGrid g = torus_grid(8);
  MetricField m = euclidean_metric(g);
  KForm one(g, 0);
  for (auto& v : one.c[0]) v = 1.0;
  KForm vol = hodge_star(m, one);
  for (double v : vol.c[0]) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));

  KForm dx1(g, 1);
  for (auto& v : dx1.c[0]) v = 1.0;
  KForm s = hodge_star(m, dx1);
  double err = 0.0;
  for (double v : s.c[0]) err = std::max(err, std::fabs(v - 1.0));
  CHECK(err < 1e-15);
  CHECK(max_abs(s.c[1]) < 1e-15);
  CHECK(max_abs(s.c[2]) < 1e-15);
}

TEST_CASE("hodge_star: star(star(alpha)) = alpha for random metric") {
  ChartGrid g = torus_grid(8);
  MetricField m = random_pd_metric(g);
  for (int deg = 0; deg <= 3; ++deg) {
    KForm a(g, deg);
    std::mt19937 rng(17 + deg);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < a.ncomp(); ++i)
      for (auto& v : a.c[i]) v = u(rng);
    KForm ss = hodge_star(m, hodge_star(m, a));
    CHECK(max_abs(form_difference(ss, a)) < 1e-13);
  }
}

TEST_CASE("hodge_star: singular metric reported with location") {
  ChartGrid g = torus_grid(8);
  MetricField m = euclidean_metric(g);
  m.g[0][g.index(2, 3, 4)] = -1.0;
  KForm a(g, 1);
  try {
    (void)hodge_star(m, a);
    CHECK(false);
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("(2,3,4)") != std::string::npos);
  }
}

TEST_CASE("integrate_3form: constants and closed-form oracle") {
  ChartGrid g = torus_grid(32);
  KForm zero(g, 3);
  CHECK(integrate_3form(zero) == 0.0);

  KForm one(g, 3);
  for (auto& v : one.c[0]) v = 1.0;
  const double vol = std::pow(2 * kPi, 3);
  CHECK(integrate_3form(one) == doctest::Approx(vol).epsilon(1e-13));

  KForm s2(g, 3);
  ScalarField s = make_scalar(g, [](double x, double, double) {
    return std::sin(x) * std::sin(x);
  });
  s2.c[0] = s.v;
  CHECK(integrate_3form(s2) == doctest::Approx(vol / 2).epsilon(1e-13));
}

TEST_CASE("integrate_3form: trapezoid on bounded axes") {
  ChartGrid g = bounded_grid({16, 16, 16}, {0, 0, 0}, {1, 1, 1});
  KForm one(g, 3);
  for (auto& v : one.c[0]) v = 1.0;
  CHECK(integrate_3form(one) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("integrate_3form: Stokes on closed manifold is machine zero") {
  ChartGrid g = torus_grid(24);
  KForm beta(g, 2);
  ScalarField f = make_scalar(g, [](double x, double y, double z) {
    return std::sin(x + 2 * y) * std::cos(z);
  });
  beta.c[0] = f.v;
  beta.c[1] = f.v;
  ScalarField h = make_scalar(g, [](double x, double y, double) {
    return std::cos(3 * x) + std::sin(y);
  });
  beta.c[2] = h.v;
  const double val = integrate_3form(exterior_d(beta));
  CHECK(std::fabs(val) < 1e-11);
}

TEST_CASE("sharp/flat: Euclidean and random round-trip") {
  ChartGrid g = torus_grid(8);
  MetricField e = euclidean_metric(g);
  KForm dx1(g, 1);
  for (auto& v : dx1.c[0]) v = 1.0;
  VectorField z = sharp(e, dx1);
  double err = 0.0;
  for (double v : z.c[0]) err = std::max(err, std::fabs(v - 1.0));
  CHECK(err == 0.0);
  CHECK(max_abs(z.c[1]) == 0.0);
  CHECK(max_abs(z.c[2]) == 0.0);

  MetricField m = random_pd_metric(g);
  KForm a = random_one_form(g, 23);
  KForm back = flat(m, sharp(m, a));
  CHECK(max_abs(form_difference(back, a)) < 1e-14);
}

TEST_CASE("Leibniz rule holds at truncation order") {
  ChartGrid g = torus_grid(24);
  KForm a = random_one_form(g, 31);
  KForm b = random_one_form(g, 37);
  // d(a^b) = da^b - a^db for 1-forms.
  KForm lhs = exterior_d(wedge(a, b));
  KForm rhs = wedge(exterior_d(a), b);
  axpy(rhs, -1.0, wedge(a, exterior_d(b)));
  CHECK(max_abs(form_difference(lhs, rhs)) < 2e-3);
}

TEST_CASE("kernels: OpenMP and serial reference agree bitwise") {
  ChartGrid g = torus_grid(16);
  g.topo[2] = Topology::bounded;
  ScalarField f = make_scalar(g, [](double x, double y, double z) {
    return std::sin(x) * std::cos(y) + 0.3 * z * z;
  });
  for (int ax = 0; ax < 3; ++ax) {
    std::vector<double> a(f.v.size()), b(f.v.size());
    derivative_axis(g, f.v.data(), a.data(), ax);
    ref::derivative_axis_serial(g, f.v.data(), b.data(), ax);
    CHECK(a == b);
  }
  CHECK(deterministic_sum(f.v) == ref::deterministic_sum_serial(f.v));
  // The deterministic sum tracks the compensated serial sum closely.
  CHECK(deterministic_sum(f.v) ==
        doctest::Approx(ref::kahan_sum(f.v)).epsilon(1e-13));
}
