#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gvlab/critical.hpp"
#include "gvlab/scenarios.hpp"

using namespace gvlab;

namespace {

// Integrable chart with proportional one-forms: omega = dz + P dx1 + c P dx2
// stays integrable for any z-profile P, so cubic terms give a nonzero
// (L_T)^3 omega while omega ^ d(omega) = 0.
CompatiblePair proportional_chart(std::array<int, 3> n, double c, double c3) {
  ChartGrid g = bounded_grid(n, {-1, -1, -1}, {1, 1, 1});
  auto prof = [c3](double z) { return 0.3 + z + 0.2 * z * z + c3 * z * z * z; };
  DistributionPair dp;
  dp.omega = make_one_form(g, [&, c](double, double, double z) {
    return std::array<double, 3>{prof(z), c * prof(z), 1.0};
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
        const double p1 = prof(z), p2 = c * prof(z);
        m.g[0][p] = 1 + p1 * p1;
        m.g[1][p] = p1 * p2;
        m.g[2][p] = p1;
        m.g[3][p] = 1 + p2 * p2;
        m.g[4][p] = p2;
        m.g[5][p] = 1;
      }
  CompatiblePair cp{dp, std::move(m)};
  cp.validate(1e-12);
  return cp;
}

double mask_max(const ChartGrid& g, const std::vector<std::uint8_t>& mask,
                const ScalarField& f) {
  double m = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p)
    if (mask[p]) m = std::max(m, std::fabs(f.v[p]));
  return m;
}

std::vector<std::uint8_t> interior_mask(const ChartGrid& g,
                                        const std::vector<std::uint8_t>& base,
                                        int layers) {
  auto m = erode_mask(g, base, layers);
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        const int idx[3] = {i, j, k};
        for (int a = 0; a < 3; ++a)
          if (g.topo[a] == Topology::bounded &&
              (idx[a] < layers || idx[a] >= g.n[a] - layers))
            m[g.index(i, j, k)] = 0;
      }
  return m;
}

}  // namespace

TEST_CASE("lt3_residual: quadratic chart is critical to machine precision") {
  CompatiblePair cp = find_scenario("integrable_chart").build({16, 16, 16});
  CHECK(max_abs(lt3_residual(cp.dp)) < 1e-11);
  CompatiblePair fl = find_scenario("foliation_flat").build({16, 16, 16});
  CHECK(max_abs(lt3_residual(fl.dp)) == 0.0);
}

TEST_CASE("lt3_residual: cubic chart gives 6 c3 in both components") {
  const double c3 = 0.15;
  CompatiblePair cp =
      find_scenario("integrable_chart_cubic").build({16, 16, 16});
  KForm r = lt3_residual(cp.dp);
  double e1 = 0, e2 = 0;
  for (std::size_t p = 0; p < cp.grid().size(); ++p) {
    e1 = std::max(e1, std::fabs(r.c[0][p] - 6 * c3));
    e2 = std::max(e2, std::fabs(r.c[1][p] - 6 * c3));
  }
  CHECK(e1 < 1e-11);  // stencils are exact on cubics (roundoff only)
  CHECK(e2 < 1e-11);
  CHECK(max_abs(r.c[2]) < 1e-11);
}

TEST_CASE("geometric EL residuals match the frame components of lt3") {
  SUBCASE("critical quadratic chart: both vanish") {
    CompatiblePair cp = find_scenario("integrable_chart").build({24, 24, 24});
    FrenetData fd = frenet(cp, 1e-6);
    REQUIRE(fd.mask_fraction() == 1.0);
    SecondFundamentalData sfd = second_fundamental(cp, fd);
    GeometricElResiduals ge = geometric_el_residuals(cp, fd, sfd);
    auto m = interior_mask(cp.grid(), fd.valid, 4);
    CHECK(mask_max(cp.grid(), m, ge.line_n) < 1e-10);
    CHECK(mask_max(cp.grid(), m, ge.line_b) < 1e-10);
  }
  SUBCASE("non-critical proportional cubic chart: N-line, 4th order") {
    double errs[2];
    int idx = 0;
    for (int n : {32, 64}) {
      CompatiblePair cp = proportional_chart({n, n, n}, 0.7, 0.15);
      FrenetData fd = frenet(cp, 1e-6);
      SecondFundamentalData sfd = second_fundamental(cp, fd);
      GeometricElResiduals ge = geometric_el_residuals(cp, fd, sfd);
      KForm l3 = lt3_residual(cp.dp);
      ScalarField l3n = eval_one_form(l3, fd.N);
      ScalarField diff(cp.grid());
      for (std::size_t p = 0; p < diff.v.size(); ++p)
        diff.v[p] = ge.line_n.v[p] - l3n.v[p];
      auto m = interior_mask(cp.grid(), fd.valid, 4);
      errs[idx++] = mask_max(cp.grid(), m, diff);
    }
    CHECK(errs[0] < 1e-4);
    CHECK(errs[0] / errs[1] > 8.0);
  }
  SUBCASE("twisted product: B-line matches with the derived sign") {
    CompatiblePair cp = find_scenario("twisted").build({32, 32, 32});
    FrenetData fd = frenet(cp, 0.05);
    SecondFundamentalData sfd = second_fundamental(cp, fd);
    GeometricElResiduals ge = geometric_el_residuals(cp, fd, sfd);
    KForm l3 = lt3_residual(cp.dp);
    ScalarField l3b = eval_one_form(l3, fd.B);
    auto m = erode_mask(cp.grid(), fd.valid, 3);
    double match = 0, flipped = 0, scale = 0;
    for (std::size_t p = 0; p < cp.grid().size(); ++p) {
      if (!m[p]) continue;
      match = std::max(match, std::fabs(ge.line_b.v[p] - l3b.v[p]));
      flipped = std::max(flipped, std::fabs(ge.line_b.v[p] + l3b.v[p]));
      scale = std::max(scale, std::fabs(l3b.v[p]));
    }
    CHECK(scale > 0.05);           // the comparison is not vacuous
    CHECK(match < 0.15 * scale);   // derived sign agrees
    CHECK(match < 0.2 * flipped);  // opposite sign is far off
  }
}

TEST_CASE("umbilic system: warped and factorizable twisted pass") {
  // Warped (z-independent phi): every T-derivative is a stencil applied
  // along an axis of constancy, so the residuals are machine zero.
  {
    CompatiblePair cp = find_scenario("warped").build({32, 32, 32});
    FrenetData fd = frenet(cp, 0.05);
    SecondFundamentalData sfd = second_fundamental(cp, fd);
    ScalarField lambda(cp.grid());
    for (std::size_t p = 0; p < lambda.v.size(); ++p)
      lambda.v[p] = 0.5 * sfd.sigma1.v[p];
    UmbilicResiduals ur = umbilic_system_residuals(cp, fd, sfd, lambda, 1e-3);
    auto m = erode_mask(cp.grid(), fd.valid, 3);
    CHECK(mask_max(cp.grid(), m, ur.r1) < 1e-12);
    CHECK(mask_max(cp.grid(), m, ur.r2) < 1e-12);
    CHECK(mask_max(cp.grid(), m, fd.tau) < 1e-12);
  }
  // Factorizable twisted product: the torsion vanishes at machine level
  // (the criticality criterion), the first equation at truncation level.
  {
    CompatiblePair cp =
        find_scenario("twisted_factorizable").build({32, 32, 32});
    FrenetData fd = frenet(cp, 0.05);
    SecondFundamentalData sfd = second_fundamental(cp, fd);
    ScalarField lambda(cp.grid());
    for (std::size_t p = 0; p < lambda.v.size(); ++p)
      lambda.v[p] = 0.5 * sfd.sigma1.v[p];
    UmbilicResiduals ur = umbilic_system_residuals(cp, fd, sfd, lambda, 1e-3);
    auto m = erode_mask(cp.grid(), fd.valid, 3);
    CHECK(mask_max(cp.grid(), m, ur.r1) < 2e-3);
    CHECK(mask_max(cp.grid(), m, ur.r2) < 1e-10);
    CHECK(mask_max(cp.grid(), m, fd.tau) < 1e-10);
  }
}

TEST_CASE("umbilic system: non-factorizable twisted has torsion") {
  CompatiblePair cp = find_scenario("twisted").build({32, 32, 32});
  FrenetData fd = frenet(cp, 0.05);
  auto m = erode_mask(cp.grid(), fd.valid, 3);
  CHECK(mask_max(cp.grid(), m, fd.tau) > 1e-2);
}

TEST_CASE("umbilic system: umbilicity violation rejected") {
  CompatiblePair cp = find_scenario("tilted").build({16, 16, 16});
  FrenetData fd = frenet(cp, 1e-6);
  SecondFundamentalData sfd = second_fundamental(cp, fd);
  ScalarField lambda(cp.grid());
  CHECK_THROWS_AS((void)umbilic_system_residuals(cp, fd, sfd, lambda, 1e-6),
                  std::domain_error);
}

TEST_CASE("periodic-solution sweep: k'' = tau^2 k fails for tau = c/k^2") {
  // With k(z) = 1 + 0.3 sin z periodic and tau = c / k^2 (the form forced
  // by the second equation), the first equation's residual stays bounded
  // away from zero for every nonzero c, so the only periodic solutions
  // have constant k and tau = 0.
  ChartGrid g = torus_grid(64);
  ScalarField k = make_scalar(
      g, [](double, double, double z) { return 1.0 + 0.3 * std::sin(z); });
  ScalarField kzz = partial_derivative(partial_derivative(k, 3), 3);
  for (double c : {0.25, 0.5, 1.0}) {
    double min_max_residual = 1e300;
    double mx = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
      const double tau = c / (k.v[p] * k.v[p]);
      mx = std::max(mx, std::fabs(kzz.v[p] - tau * tau * k.v[p]));
    }
    min_max_residual = std::min(min_max_residual, mx);
    CHECK(min_max_residual > 0.1);
  }
  // Constant k with tau = 0 solves the system exactly.
  ScalarField kc(g);
  for (auto& v : kc.v) v = 1.7;
  ScalarField kczz = partial_derivative(partial_derivative(kc, 3), 3);
  CHECK(max_abs(kczz) < 1e-12);
}

TEST_CASE("metric EL residuals: zeros on trivial and geodesic scenarios") {
  {
    // Integrable: T_{N,B} = 0 identically, so all residuals vanish.
    CompatiblePair cp = find_scenario("foliation_flat").build({16, 16, 16});
    FrenetData fd = frenet(cp, 1e-8);
    SecondFundamentalData sfd = second_fundamental(cp, fd);
    MetricElResiduals q = metric_el_residuals(cp, fd, sfd);
    CHECK(max_abs(q.q1) < 1e-13);
    CHECK(max_abs(q.q2) < 1e-13);
    CHECK(max_abs(q.q3) < 1e-13);
  }
  {
    // Geodesic field: k = 0, empty mask; Q1 built from the constant
    // integrability tensor of the contact structure.
    CompatiblePair cp = find_scenario("contact_t3").build({24, 24, 24});
    FrenetData fd = frenet(cp, 1e-8);
    SecondFundamentalData sfd = second_fundamental(cp, fd);
    MetricElResiduals q = metric_el_residuals(cp, fd, sfd);
    CHECK(max_abs(q.q1) < 1e-10);
    CHECK(max_abs(q.q2) == 0.0);
    CHECK(max_abs(q.q3) == 0.0);
  }
}

TEST_CASE("metric EL residuals are the FD gradient of the functional") {
  const Scenario& sc = find_scenario("tilted");
  CompatiblePair cp = sc.build({32, 32, 32});
  const ChartGrid& g = cp.grid();
  FrenetData fd = frenet(cp, sc.k_min);
  REQUIRE(fd.mask_fraction() == 1.0);
  SecondFundamentalData sfd = second_fundamental(cp, fd);
  MetricElResiduals q = metric_el_residuals(cp, fd, sfd);
  VectorField e1, e2;
  frame_or_aux(cp, fd, e1, e2);

  ScalarField b = bump_field(g, 0.6);
  auto run_probe = [&](int which, const ScalarField& shape) {
    FrameMetricVariation s{ScalarField(g), ScalarField(g), ScalarField(g),
                           ScalarField(g), ScalarField(g), ScalarField(g)};
    ScalarField* comps[6] = {&s.s_tt, &s.s_tn, &s.s_tb,
                             &s.s_nn, &s.s_nb, &s.s_bb};
    for (std::size_t p = 0; p < g.size(); ++p)
      comps[which]->v[p] = b.v[p] * shape.v[p];
    MetricFdResult fdr = metric_variation_fd(cp, e1, e2, s, 1e-3, 1);
    const double pairing = metric_el_pairing(cp, fd, q, s);
    return std::pair<double, double>(fdr.richardson, pairing);
  };

  // Probe each T-row component along its own residual field so the
  // pairing is strictly nonzero, and check FD agreement at truncation
  // accuracy.
  ScalarField shape_tt = q.q1;
  ScalarField shape_tn(g), shape_tb(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    shape_tn.v[p] = fd.k.v[p] * q.q2.v[p];
    shape_tb.v[p] = fd.k.v[p] * q.q3.v[p];
  }
  for (ScalarField* sh : {&shape_tt, &shape_tn, &shape_tb}) {
    const double m = max_abs(*sh);
    if (m > 0)
      for (auto& v : sh->v) v /= m;
  }
  const ScalarField* shapes[3] = {&shape_tt, &shape_tn, &shape_tb};
  for (int which : {0, 1, 2}) {
    auto [fdv, pv] = run_probe(which, *shapes[which]);
    CHECK(std::fabs(fdv - pv) <
          5e-3 * std::max(1.0, std::max(std::fabs(fdv), std::fabs(pv))));
    CHECK(std::fabs(fdv) > 1e-5);  // non-vacuous
  }
  // D-only components leave the functional unchanged (eta is metric-free).
  ScalarField trig = make_scalar(
      g, [](double x, double y, double) { return std::cos(x) + std::sin(y); });
  for (int which : {3, 4, 5}) {
    auto [fdv, pv] = run_probe(which, trig);
    CHECK(std::fabs(fdv) < 1e-9);
    CHECK(pv == 0.0);
  }
}

TEST_CASE("non-extremum: metric second variations of both signs") {
  CompatiblePair cp = find_scenario("contact_t3").build({24, 24, 24});
  const ChartGrid& g = cp.grid();
  FrenetData fd = frenet(cp, 1e-8);
  VectorField e1, e2;
  frame_or_aux(cp, fd, e1, e2);
  ScalarField b = bump_field(g, 0.5);

  FrameMetricVariation sa{ScalarField(g), ScalarField(g), ScalarField(g),
                          ScalarField(g), ScalarField(g), ScalarField(g)};
  sa.s_tt = b;
  MetricFdResult ra = metric_variation_fd(cp, e1, e2, sa, 5e-3, 2);

  // Xdot = T(w) E1 + w E2 gives S_{T,N} = -T(w), S_{T,B} = -w and the
  // induced eta_dot has I(eta_dot, eta_dot) = -int T(w)^2 dV < 0.
  ScalarField w = bump_field(g, 0.5);
  ScalarField tw = directional_derivative(cp.dp.T, w);
  FrameMetricVariation sb{ScalarField(g), ScalarField(g), ScalarField(g),
                          ScalarField(g), ScalarField(g), ScalarField(g)};
  for (std::size_t p = 0; p < g.size(); ++p) {
    sb.s_tn.v[p] = -tw.v[p];
    sb.s_tb.v[p] = -w.v[p];
  }
  MetricFdResult rb = metric_variation_fd(cp, e1, e2, sb, 5e-3, 2);

  CHECK(ra.richardson > 1e-3);
  CHECK(rb.richardson < -1e-3);
}

TEST_CASE("rectifying planes: engineered scenario true, tilted false") {
  {
    const Scenario& sc = find_scenario("rectifying");
    CompatiblePair cp = sc.build({32, 32, 32});
    FrenetData fd = frenet(cp, 0.02);
    CHECK(fd.mask_fraction() == 1.0);
    SecondFundamentalData sfd = second_fundamental(cp, fd);
    RectifyingPlaneReport rep = rectifying_plane_check(cp, fd, sfd, 5e-3);
    CHECK(rep.verdict);
    CHECK(rep.min_abs_tcal > 0.1);  // nowhere integrable
    CHECK(std::fabs(rep.gv) < 1e-10);
  }
  {
    const Scenario& sc = find_scenario("tilted");
    CompatiblePair cp = sc.build({32, 32, 32});
    FrenetData fd = frenet(cp, sc.k_min);
    SecondFundamentalData sfd = second_fundamental(cp, fd);
    RectifyingPlaneReport rep = rectifying_plane_check(cp, fd, sfd, 5e-3);
    CHECK_FALSE(rep.verdict);
    CHECK(rep.max_on_mask > 0.1);
  }
}
