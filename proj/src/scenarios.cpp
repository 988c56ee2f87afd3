#include "gvlab/scenarios.hpp"

#include <cmath>
#include <stdexcept>

namespace gvlab {

namespace {

const double kPi = 3.14159265358979323846;
const double kTwoPi = 6.28318530717958647692;

CompatiblePair build_foliation_flat(std::array<int, 3> n) {
  ChartGrid g = torus_grid(n);
  DistributionPair dp;
  dp.omega = make_one_form(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  dp.T = make_vector(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  return build_compatible_metric(dp, MetricSeed{});
}

// The standard tight contact structure on T^3 with its Reeb field; the
// Euclidean metric is compatible and makes T geodesic.
CompatiblePair build_contact_t3(std::array<int, 3> n) {
  ChartGrid g = torus_grid(n);
  DistributionPair dp;
  dp.omega = make_one_form(g, [](double, double, double z) {
    return std::array<double, 3>{std::cos(z), -std::sin(z), 0.0};
  });
  dp.T = make_vector(g, [](double, double, double z) {
    return std::array<double, 3>{std::cos(z), -std::sin(z), 0.0};
  });
  return build_compatible_metric(dp, MetricSeed{});
}

// omega = dz + A(x1,x2) dx1 + B(x1,x2) dx2 with T = d3: eta vanishes
// identically (no z-dependence), the plane field is non-integrable where
// B_{,1} - A_{,2} != 0.
CompatiblePair build_contact_z(std::array<int, 3> n, double a) {
  ChartGrid g = torus_grid(n);
  DistributionPair dp;
  dp.omega = make_one_form(g, [a](double x, double y, double) {
    return std::array<double, 3>{a * std::cos(y), a * std::sin(x), 1.0};
  });
  dp.T = make_vector(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  return build_compatible_metric(dp, MetricSeed{});
}

// omega = dz + P1 dx1 + P2 dx2, T = d3, with
//   P1 = a sin(z)(1 + b cos(x2)),  P2 = a cos(z)(1 + b sin(x1)).
// eta ^ d(eta) = a^2 (1 + b cos x2)(1 + b sin x1) dx1^dx2^dz, so
// gv = a^2 (2 pi)^3 exactly; the curvature never vanishes.
CompatiblePair build_tilted(std::array<int, 3> n, double a, double b) {
  ChartGrid g = torus_grid(n);
  DistributionPair dp;
  dp.omega = make_one_form(g, [a, b](double x, double y, double z) {
    return std::array<double, 3>{a * std::sin(z) * (1.0 + b * std::cos(y)),
                                 a * std::cos(z) * (1.0 + b * std::sin(x)),
                                 1.0};
  });
  dp.T = make_vector(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  return build_compatible_metric(dp, MetricSeed{});
}

// Twisted product metric dx1^2 + dx2^2 + phi^2 dz^2 with fibers the
// z-circles: T = phi^{-1} d3, omega = phi dz. The leaves z = const are
// totally geodesic; phi independent of z gives the warped product.
CompatiblePair build_product(std::array<int, 3> n, const PointFn& phi) {
  ChartGrid g = torus_grid(n);
  DistributionPair dp;
  dp.omega = make_one_form(g, [&](double x, double y, double z) {
    return std::array<double, 3>{0.0, 0.0, phi(x, y, z)};
  });
  dp.T = make_vector(g, [&](double x, double y, double z) {
    return std::array<double, 3>{0.0, 0.0, 1.0 / phi(x, y, z)};
  });
  MetricField m(g);
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        const std::size_t p = g.index(i, j, k);
        const double f = phi(g.coord(0, i), g.coord(1, j), g.coord(2, k));
        m.g[0][p] = 1.0;
        m.g[3][p] = 1.0;
        m.g[5][p] = f * f;
      }
  CompatiblePair cp{dp, std::move(m)};
  cp.validate(1e-12);
  return cp;
}

// Contact pair on T^3 with the transverse field shifted inside the Reeb
// family: T~ = T + f X1 where X1 = sin(z) d1 + cos(z) d2 spans ker(omega)
// together with d3. Then eta = f dz, eta ^ d(eta) = 0 pointwise, k > 0
// wherever f != 0, and T_{N,B} never vanishes (contact).
CompatiblePair build_rectifying(std::array<int, 3> n, double f0, double f1) {
  ChartGrid g = torus_grid(n);
  DistributionPair dp;
  dp.omega = make_one_form(g, [](double, double, double z) {
    return std::array<double, 3>{std::cos(z), -std::sin(z), 0.0};
  });
  dp.T = make_vector(g, [f0, f1](double x, double y, double z) {
    const double f = f0 + f1 * std::sin(x + 2.0 * z) * std::cos(y);
    return std::array<double, 3>{std::cos(z) + f * std::sin(z),
                                 -std::sin(z) + f * std::cos(z), 0.0};
  });
  return build_compatible_metric(dp, MetricSeed{});
}

// Bounded Darboux chart: omega = dx3 - x2 dx1 with T = d3 and the
// Euclidean metric (not compatible; used for the pointwise stability
// conditions which require only the distribution and a metric).
CompatiblePair build_contact_chart(std::array<int, 3> n) {
  ChartGrid g = bounded_grid(n, {-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0});
  DistributionPair dp;
  dp.omega = make_one_form(g, [](double, double y, double) {
    return std::array<double, 3>{-y, 0.0, 1.0};
  });
  dp.T = make_vector(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  return build_compatible_metric(dp, MetricSeed{});
}

// Bounded chart with omega = dz + P1 dx1 + P2 dx2, P_i quadratic (or cubic)
// polynomials in z with constant coefficients satisfying the two
// integrability relations, and the compatible chart metric
// g33 = 1, g_{i3} = P_i, g_{ij} = delta_{ij} + P_i P_j.
struct ChartCoeffs {
  double C10, C11, C12, C20, C21, C22;
  double cubic = 0.0;
};

CompatiblePair build_integrable_chart(std::array<int, 3> n,
                                      const ChartCoeffs& cc) {
  ChartGrid g = bounded_grid(n, {-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0});
  auto P1 = [cc](double z) {
    return cc.C10 + cc.C11 * z + cc.C12 * z * z + cc.cubic * z * z * z;
  };
  auto P2 = [cc](double z) {
    return cc.C20 + cc.C21 * z + cc.C22 * z * z + cc.cubic * z * z * z;
  };
  DistributionPair dp;
  dp.omega = make_one_form(g, [&](double, double, double z) {
    return std::array<double, 3>{P1(z), P2(z), 1.0};
  });
  dp.T = make_vector(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  MetricField m(g);
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        const std::size_t p = g.index(i, j, k);
        const double z = g.coord(2, k);
        const double p1 = P1(z), p2 = P2(z);
        m.g[0][p] = 1.0 + p1 * p1;
        m.g[1][p] = p1 * p2;
        m.g[2][p] = p1;
        m.g[3][p] = 1.0 + p2 * p2;
        m.g[4][p] = p2;
        m.g[5][p] = 1.0;
      }
  CompatiblePair cp{dp, std::move(m)};
  cp.validate(1e-12);
  return cp;
}

ChartCoeffs default_chart_coeffs(double cubic) {
  ChartCoeffs cc;
  cc.C10 = 0.3;
  cc.C11 = 1.0;
  cc.C12 = 0.2;
  cc.C22 = 0.25;
  cc.C20 = cc.C10 * cc.C22 / cc.C12;  // integrability relations
  cc.C21 = cc.C22 * cc.C11 / cc.C12;
  cc.cubic = cubic;
  return cc;
}

// z-bounded chart (periodic in x1, x2) for the polynomial Jacobi-field
// construction; same chart metric as above.
CompatiblePair build_jacobi_chart(std::array<int, 3> n,
                                  const ChartCoeffs& cc) {
  ChartGrid g = z_chart_grid(n, -1.0, 1.0);
  auto P1 = [cc](double z) { return cc.C10 + cc.C11 * z + cc.C12 * z * z; };
  auto P2 = [cc](double z) { return cc.C20 + cc.C21 * z + cc.C22 * z * z; };
  DistributionPair dp;
  dp.omega = make_one_form(g, [&](double, double, double z) {
    return std::array<double, 3>{P1(z), P2(z), 1.0};
  });
  dp.T = make_vector(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  MetricField m(g);
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        const std::size_t p = g.index(i, j, k);
        const double z = g.coord(2, k);
        const double p1 = P1(z), p2 = P2(z);
        m.g[0][p] = 1.0 + p1 * p1;
        m.g[1][p] = p1 * p2;
        m.g[2][p] = p1;
        m.g[3][p] = 1.0 + p2 * p2;
        m.g[4][p] = p2;
        m.g[5][p] = 1.0;
      }
  CompatiblePair cp{dp, std::move(m)};
  cp.validate(1e-12);
  return cp;
}

// Flat z-bounded chart for the sixth-order eigen-relation residuals. The
// z-extent is kept moderate: six composed stencils amplify roundoff by
// (3/(2h))^6, so very small spacings drown the residual in noise.
CompatiblePair build_eigen_chart(std::array<int, 3> n) {
  ChartGrid g = z_chart_grid(n, -1.0, 1.0);
  DistributionPair dp;
  dp.omega = make_one_form(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  dp.T = make_vector(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  return build_compatible_metric(dp, MetricSeed{});
}

std::vector<Scenario> make_catalog() {
  std::vector<Scenario> cat;

  Scenario s;
  s.name = "foliation_flat";
  s.description = "planar foliation omega = dz with T = d3, flat metric";
  s.periodic = true;
  s.k_min = 1e-8;
  s.expected_gv = 0.0;
  s.integrable = true;
  s.eta_zero = true;
  cat.push_back(s);

  s = Scenario{};
  s.name = "contact_t3";
  s.description =
      "tight contact structure on the 3-torus with its Reeb field; flat "
      "compatible metric, geodesic T";
  s.periodic = true;
  s.k_min = 1e-8;
  s.expected_gv = 0.0;
  s.eta_zero = true;
  cat.push_back(s);

  s = Scenario{};
  s.name = "contact_z";
  s.description =
      "omega = dz + A(x,y) dx1 + B(x,y) dx2 with T = d3: eta = 0, "
      "non-integrable where curl(A,B) != 0";
  s.periodic = true;
  s.k_min = 1e-8;
  s.expected_gv = 0.0;
  s.eta_zero = true;
  s.params["amplitude"] = 0.3;
  cat.push_back(s);

  s = Scenario{};
  s.name = "tilted";
  s.description =
      "non-integrable pair with nowhere-vanishing curvature and "
      "gv = a^2 (2 pi)^3 in closed form";
  s.periodic = true;
  s.k_min = 1e-6;
  s.params["a"] = 0.15;
  s.params["b"] = 0.12;
  s.expected_gv = 0.15 * 0.15 * kTwoPi * kTwoPi * kTwoPi;
  cat.push_back(s);

  s = Scenario{};
  s.name = "warped";
  s.description =
      "warped product torus x_phi circle with phi = phi(x1,x2); "
      "integrable, gv = 0, umbilic system with lambda = 0";
  s.periodic = true;
  s.k_min = 1e-6;
  s.expected_gv = 0.0;
  s.integrable = true;
  s.params["c0"] = 1.0;
  s.params["c1"] = 0.25;
  cat.push_back(s);

  s = Scenario{};
  s.name = "twisted";
  s.description =
      "twisted product with non-factorizable phi(x1,x2,z): torsion of the "
      "fiber curves is bounded away from zero";
  s.periodic = true;
  s.k_min = 1e-6;
  s.integrable = true;
  s.params["c0"] = 1.0;
  s.params["c1"] = 0.25;
  s.params["c2"] = 0.2;
  cat.push_back(s);

  s = Scenario{};
  s.name = "twisted_factorizable";
  s.description =
      "twisted product with phi = phi1(x1,x2) phi2(z): critical pair, "
      "torsion vanishes";
  s.periodic = true;
  s.k_min = 1e-6;
  s.integrable = true;
  s.params["c0"] = 1.0;
  s.params["c1"] = 0.25;
  s.params["c2"] = 0.2;
  cat.push_back(s);

  s = Scenario{};
  s.name = "rectifying";
  s.description =
      "contact pair with shifted transverse field: k > 0 everywhere, "
      "eta ^ d(eta) = 0 pointwise, rectifying planes integrable";
  s.periodic = true;
  s.k_min = 1e-6;
  s.expected_gv = 0.0;
  s.params["f0"] = 0.3;
  s.params["f1"] = 0.15;
  cat.push_back(s);

  s = Scenario{};
  s.name = "contact_chart";
  s.description =
      "bounded Darboux chart omega = dx3 - x2 dx1 with T = d3; hosts the "
      "pointwise stability (confoliation) conditions";
  s.periodic = false;
  s.k_min = 1e-8;
  s.eta_zero = true;
  cat.push_back(s);

  s = Scenario{};
  s.name = "integrable_chart";
  s.description =
      "bounded chart, omega = dz + P1 dx1 + P2 dx2 with quadratic P_i and "
      "the chart metric: critical, (L_T)^3 omega = 0";
  s.periodic = false;
  s.k_min = 1e-8;
  s.integrable = true;
  cat.push_back(s);

  s = Scenario{};
  s.name = "integrable_chart_cubic";
  s.description =
      "negative control: cubic P_i give (L_T)^3 omega = 6 c3 (dx1 + dx2)";
  s.periodic = false;
  s.k_min = 1e-8;
  s.integrable = true;
  s.params["c3"] = 0.15;
  cat.push_back(s);

  s = Scenario{};
  s.name = "jacobi_chart";
  s.description =
      "z-bounded chart with quadratic background P_i for polynomial "
      "Jacobi-field construction";
  s.periodic = false;
  s.k_min = 1e-8;
  s.integrable = true;
  cat.push_back(s);

  s = Scenario{};
  s.name = "eigen_chart";
  s.description =
      "flat z-bounded chart for sixth-order eigen-relation residuals";
  s.periodic = false;
  s.k_min = 1e-8;
  s.integrable = true;
  cat.push_back(s);

  return cat;
}

}  // namespace

CompatiblePair Scenario::build(std::array<int, 3> n) const {
  if (name == "foliation_flat") return build_foliation_flat(n);
  if (name == "contact_t3") return build_contact_t3(n);
  if (name == "contact_z")
    return build_contact_z(n, params.at("amplitude"));
  if (name == "tilted") return build_tilted(n, params.at("a"), params.at("b"));
  if (name == "warped") {
    const double c0 = params.at("c0"), c1 = params.at("c1");
    return build_product(n, [c0, c1](double x, double y, double) {
      return c0 + c1 * std::cos(x) * std::cos(y);
    });
  }
  if (name == "twisted") {
    const double c0 = params.at("c0"), c1 = params.at("c1"),
                 c2 = params.at("c2");
    return build_product(n, [c0, c1, c2](double x, double y, double z) {
      return c0 + c1 * std::cos(x) * std::cos(y) +
             c2 * std::cos(x + 0.4) * std::cos(z);
    });
  }
  if (name == "twisted_factorizable") {
    const double c0 = params.at("c0"), c1 = params.at("c1"),
                 c2 = params.at("c2");
    return build_product(n, [c0, c1, c2](double x, double y, double z) {
      return (c0 + c1 * std::cos(x) * std::cos(y)) *
             (1.0 + c2 * std::cos(z));
    });
  }
  if (name == "rectifying")
    return build_rectifying(n, params.at("f0"), params.at("f1"));
  if (name == "contact_chart") return build_contact_chart(n);
  if (name == "integrable_chart")
    return build_integrable_chart(n, default_chart_coeffs(0.0));
  if (name == "integrable_chart_cubic")
    return build_integrable_chart(n, default_chart_coeffs(params.at("c3")));
  if (name == "jacobi_chart")
    return build_jacobi_chart(n, default_chart_coeffs(0.0));
  if (name == "eigen_chart") return build_eigen_chart(n);
  throw std::invalid_argument("unknown scenario: " + name);
}

const std::vector<Scenario>& scenario_catalog() {
  static const std::vector<Scenario> cat = make_catalog();
  return cat;
}

const Scenario& find_scenario(const std::string& name) {
  for (const auto& s : scenario_catalog())
    if (s.name == name) return s;
  throw std::invalid_argument("unknown scenario: " + name);
}

ScalarField bump_field(const ChartGrid& g, double support_fraction) {
  ScalarField b(g);
  std::array<double, 3> center{}, half{};
  for (int a = 0; a < 3; ++a) {
    const double lo = g.origin[a];
    const double hi = g.origin[a] + g.extent[a];
    center[a] = 0.5 * (lo + hi);
    half[a] = 0.5 * support_fraction * g.extent[a];
  }
  auto window = [](double t) {
    // raised cosine squared: C^3 at the support boundary
    if (std::fabs(t) >= 1.0) return 0.0;
    const double c = 0.5 * (1.0 + std::cos(kPi * t));
    return c * c;
  };
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        const double t0 = (g.coord(0, i) - center[0]) / half[0];
        const double t1 = (g.coord(1, j) - center[1]) / half[1];
        const double t2 = (g.coord(2, k) - center[2]) / half[2];
        b.v[g.index(i, j, k)] = window(t0) * window(t1) * window(t2);
      }
  return b;
}

ScalarField centered_coordinate(const ChartGrid& g, int axis) {
  ScalarField s(g);
  const double c = g.origin[axis] + 0.5 * g.extent[axis];
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        const int idx[3] = {i, j, k};
        s.v[g.index(i, j, k)] = g.coord(axis, idx[axis]) - c;
      }
  return s;
}

}  // namespace gvlab
