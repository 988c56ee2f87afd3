#include "gvlab/jacobi.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gvlab {

KForm jacobi_operator(const CompatiblePair& cp, const KForm& mu) {
  if (mu.degree != 1)
    throw std::invalid_argument("jacobi_operator: 1-form required");
  KForm l2 = lie_derivative(cp.dp.T,
                            lie_derivative(cp.dp.T, exterior_d(mu)));
  return hodge_star(cp.g, l2);
}

double jacobi_pairing(const CompatiblePair& cp, const KForm& mu,
                      const KForm& nu) {
  KForm l2 = lie_derivative(cp.dp.T,
                            lie_derivative(cp.dp.T, exterior_d(mu)));
  return integrate_3form(wedge(l2, nu));
}

std::vector<std::uint8_t> chart_interior(const ChartGrid& g, int layers) {
  std::vector<std::uint8_t> m(g.size(), 1);
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

EigenResidual eigen_residual(const ScalarField& p1, const ScalarField& p2,
                             double lambda, const ScalarField& d) {
  const ChartGrid& g = p1.grid;
  if (g.topo[2] != Topology::bounded)
    throw std::invalid_argument(
        "eigen_residual: bounded z-axis required");
  // Six composed stencils of reach 2: one-sided boundary defects reach 12
  // layers inward, so the clean interior starts at layer 14.
  if (g.n[2] - 28 < 13)
    throw std::invalid_argument(
        "eigen_residual: chart too small for the composed stencil depth "
        "(needs >= 13 interior z-points)");
  for (double v : d.v)
    if (!(v > 0.0))
      throw std::invalid_argument("eigen_residual: d must be positive");

  auto dz6 = [&](const ScalarField& f) {
    ScalarField r = f;
    for (int k = 0; k < 6; ++k) r = partial_derivative(r, 3);
    return r;
  };
  ScalarField d61 = dz6(p1), d62 = dz6(p2);
  EigenResidual out;
  out.r1 = ScalarField(g);
  out.r2 = ScalarField(g);
  out.interior.assign(g.size(), 0);
  const double l2 = lambda * lambda;
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        const std::size_t p = g.index(i, j, k);
        out.r1.v[p] = d61.v[p] - l2 / d.v[p] * p1.v[p];
        out.r2.v[p] = d62.v[p] - l2 / d.v[p] * p2.v[p];
        if (k >= 14 && k < g.n[2] - 14) out.interior[p] = 1;
      }
  return out;
}

void JacobiFieldSpec::validate(double tol, double floor) const {
  const std::size_t n = grid.size();
  for (std::size_t p = 0; p < n; ++p) {
    if (std::fabs(C[0][2].v[p]) < floor)
      throw std::invalid_argument(
          "JacobiFieldSpec: C12 not bounded away from zero");
    if (std::fabs(C[1][2].v[p]) < floor)
      throw std::invalid_argument(
          "JacobiFieldSpec: C22 not bounded away from zero");
    const double r20 =
        C[1][0].v[p] - C[0][0].v[p] * C[1][2].v[p] / C[0][2].v[p];
    if (std::fabs(r20) > tol)
      throw std::invalid_argument(
          "JacobiFieldSpec: background relation C20 = C10 C22 / C12 "
          "violated");
    const double r21 =
        C[1][1].v[p] - C[1][2].v[p] * C[0][1].v[p] / C[0][2].v[p];
    if (std::fabs(r21) > tol)
      throw std::invalid_argument(
          "JacobiFieldSpec: background relation C21 = C22 C11 / C12 "
          "violated");
  }
}

JacobiBuildResult build_jacobi_field(const CompatiblePair& cp,
                                     const JacobiFieldSpec& spec,
                                     double tol) {
  spec.validate();
  const ChartGrid& g = spec.grid;
  check_same_grid(g, cp.grid(), "build_jacobi_field");
  const std::size_t n = g.size();

  JacobiBuildResult out;
  // Full coefficient set: free c[i][0..2], derived c[i][3..5].
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 6; ++j) out.coeffs[i][j] = ScalarField(g);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) out.coeffs[i][j].v = spec.c_free[i][j].v;
  for (std::size_t p = 0; p < n; ++p) {
    const double c25 = spec.c25.v[p];
    const double C10 = spec.C[0][0].v[p], C11 = spec.C[0][1].v[p],
                 C12 = spec.C[0][2].v[p];
    const double C20 = spec.C[1][0].v[p], C21 = spec.C[1][1].v[p],
                 C22 = spec.C[1][2].v[p];
    out.coeffs[0][3].v[p] = -10.0 * c25 * C10 / C22;
    out.coeffs[0][4].v[p] = -2.5 * c25 * C11 / C22;
    out.coeffs[0][5].v[p] = -c25 * C12 / C22;
    out.coeffs[1][3].v[p] = 10.0 * c25 * C20 / C22;
    out.coeffs[1][4].v[p] = 2.5 * c25 * C21 / C22;
    out.coeffs[1][5].v[p] = c25;
  }

  // Five constraint equations, exact coefficient algebra per (x1,x2).
  JacobiBuildReport& rep = out.report;
  for (std::size_t p = 0; p < n; ++p) {
    const double C10 = spec.C[0][0].v[p], C11 = spec.C[0][1].v[p],
                 C12 = spec.C[0][2].v[p];
    const double C20 = spec.C[1][0].v[p], C21 = spec.C[1][1].v[p],
                 C22 = spec.C[1][2].v[p];
    const double c13 = out.coeffs[0][3].v[p], c14 = out.coeffs[0][4].v[p],
                 c15 = out.coeffs[0][5].v[p];
    const double c23 = out.coeffs[1][3].v[p], c24 = out.coeffs[1][4].v[p],
                 c25 = out.coeffs[1][5].v[p];
    const double eq[5] = {
        C10 * c23 + C20 * c13,
        4 * C10 * c24 + C11 * c23 + 4 * C20 * c14 + C21 * c13,
        10 * C10 * c25 + 4 * C11 * c24 + C12 * c23 + 10 * C20 * c15 +
            4 * C21 * c14 + C22 * c13,
        5 * C11 * c25 + 2 * C12 * c24 + 5 * C21 * c15 + 2 * C22 * c14,
        C12 * c25 + C22 * c15};
    for (double e : eq) rep.five_eq_max = std::max(rep.five_eq_max, std::fabs(e));
  }
  // p_i is a quintic, so its sixth z-derivative vanishes identically in
  // the coefficient algebra.
  rep.sixth_deriv_max = 0.0;

  // Assemble mu on the grid.
  out.mu = KForm(g, 1);
  ScalarField p1(g), p2(g);
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        const std::size_t p = g.index(i, j, k);
        const double z = g.coord(2, k);
        double zp = 1.0, s1 = 0.0, s2 = 0.0;
        for (int d = 0; d <= 5; ++d) {
          s1 += out.coeffs[0][d].v[p] * zp;
          s2 += out.coeffs[1][d].v[p] * zp;
          zp *= z;
        }
        p1.v[p] = s1;
        p2.v[p] = s2;
      }
  out.mu.c[0] = p1.v;
  out.mu.c[1] = p2.v;

  // Background one-form components for the compatibility expression.
  ScalarField P1(g), P2(g);
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        const std::size_t p = g.index(i, j, k);
        const double z = g.coord(2, k);
        P1.v[p] = spec.C[0][0].v[p] + spec.C[0][1].v[p] * z +
                  spec.C[0][2].v[p] * z * z;
        P2.v[p] = spec.C[1][0].v[p] + spec.C[1][1].v[p] * z +
                  spec.C[1][2].v[p] * z * z;
      }
  ScalarField compat = compatibility_residual(p1, p2, P1, P2);
  KForm dmu = jacobi_operator(cp, out.mu);
  auto interior = chart_interior(g, 8);
  for (std::size_t p = 0; p < n; ++p) {
    if (!interior[p]) continue;
    rep.compat_max = std::max(rep.compat_max, std::fabs(compat.v[p]));
    for (int c = 0; c < 3; ++c)
      rep.dmu_max = std::max(rep.dmu_max, std::fabs(dmu.c[c][p]));
  }
  rep.kernel_ok = rep.dmu_max <= tol;
  return out;
}

ScalarField compatibility_residual(const ScalarField& p1,
                                   const ScalarField& p2,
                                   const ScalarField& P1,
                                   const ScalarField& P2) {
  const ChartGrid& g = p1.grid;
  ScalarField q1 = partial_derivative(partial_derivative(p1, 3), 3);
  ScalarField q2 = partial_derivative(partial_derivative(p2, 3), 3);
  ScalarField q21 = partial_derivative(q2, 1);
  ScalarField q12 = partial_derivative(q1, 2);
  ScalarField q13 = partial_derivative(q1, 3);
  ScalarField q23 = partial_derivative(q2, 3);
  ScalarField r(g);
  for (std::size_t p = 0; p < g.size(); ++p)
    r.v[p] = q21.v[p] - q12.v[p] - P1.v[p] * q23.v[p] - P2.v[p] * q13.v[p];
  return r;
}

}  // namespace gvlab
