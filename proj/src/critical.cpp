#include "gvlab/critical.hpp"

#include <cmath>
#include <stdexcept>

namespace gvlab {

KForm lt3_residual(const DistributionPair& dp) {
  KForm r = lie_derivative(dp.T, dp.omega);
  r = lie_derivative(dp.T, r);
  return lie_derivative(dp.T, r);
}

GeometricElResiduals geometric_el_residuals(
    const CompatiblePair& cp, const FrenetData& fd,
    const SecondFundamentalData& sfd) {
  const ChartGrid& g = cp.grid();
  const VectorField& t = cp.dp.T;

  ScalarField tk = directional_derivative(t, fd.k);
  ScalarField ttk = directional_derivative(t, tk);
  ScalarField th_nn = directional_derivative(t, sfd.h_nn);
  ScalarField ttau = directional_derivative(t, fd.tau);

  // k (h_{B,N} - tau) differentiated along T.
  ScalarField kbt(g);
  for (std::size_t p = 0; p < g.size(); ++p)
    kbt.v[p] = fd.k.v[p] * (sfd.h_bn.v[p] - fd.tau.v[p]);
  ScalarField tkbt = directional_derivative(t, kbt);

  GeometricElResiduals out;
  out.line_n = ScalarField(g);
  out.line_b = ScalarField(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!fd.valid[p]) continue;
    const double k = fd.k.v[p], tau = fd.tau.v[p];
    const double hnn = sfd.h_nn.v[p], hnb = sfd.h_nb.v[p],
                 hbn = sfd.h_bn.v[p], hbb = sfd.h_bb.v[p];
    const double h_an_n = hnn * hnn + hnb * hbn;
    const double h_ab_n = hbn * (hnn + hbb);
    const double h_ab_b = hbn * hnb + hbb * hbb;
    out.line_n.v[p] = ttk.v[p] - k * th_nn.v[p] - 2.0 * tk.v[p] * hnn -
                      k * h_an_n - k * tau * tau;
    out.line_b.v[p] =
        -2.0 * tkbt.v[p] +
        k * (-ttau.v[p] + h_ab_n + tau * (h_ab_b - h_an_n));
  }
  return out;
}

UmbilicResiduals umbilic_system_residuals(const CompatiblePair& cp,
                                          const FrenetData& fd,
                                          const SecondFundamentalData& sfd,
                                          const ScalarField& lambda,
                                          double umbilicity_tol) {
  const ChartGrid& g = cp.grid();
  // Check h = lambda Id on the (eroded) mask.
  auto mask = erode_mask(g, fd.valid, 2);
  double dev = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!mask[p]) continue;
    dev = std::max(dev, std::fabs(sfd.h_nn.v[p] - lambda.v[p]));
    dev = std::max(dev, std::fabs(sfd.h_bb.v[p] - lambda.v[p]));
    dev = std::max(dev, std::fabs(sfd.h_nb.v[p]));
    dev = std::max(dev, std::fabs(sfd.h_bn.v[p]));
  }
  if (dev > umbilicity_tol)
    throw std::domain_error(
        "umbilic_system_residuals: total umbilicity violated (max deviation " +
        std::to_string(dev) + ")");

  const VectorField& t = cp.dp.T;
  ScalarField tk = directional_derivative(t, fd.k);
  ScalarField ttk = directional_derivative(t, tk);
  ScalarField lk(g), ktau(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    lk.v[p] = lambda.v[p] * fd.k.v[p];
    ktau.v[p] = fd.k.v[p] * fd.tau.v[p];
  }
  ScalarField tlk = directional_derivative(t, lk);
  ScalarField tktau = directional_derivative(t, ktau);

  UmbilicResiduals out;
  out.r1 = ScalarField(g);
  out.r2 = ScalarField(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!fd.valid[p]) continue;
    const double k = fd.k.v[p], tau = fd.tau.v[p], lam = lambda.v[p];
    out.r1.v[p] = ttk.v[p] - (tau * tau - lam * lam) * k - tlk.v[p] -
                  lam * tk.v[p];
    out.r2.v[p] = tktau.v[p] + tau * tk.v[p] - 2.0 * tau * lam;
  }
  return out;
}

MetricElResiduals metric_el_residuals(const CompatiblePair& cp,
                                      const FrenetData& fd,
                                      const SecondFundamentalData& sfd) {
  const ChartGrid& g = cp.grid();
  const VectorField& t = cp.dp.T;

  VectorField tcal_t(g);
  for (std::size_t p = 0; p < g.size(); ++p)
    for (int c = 0; c < 3; ++c)
      tcal_t.c[c][p] = sfd.tcal.v[p] * t.c[c][p];
  ScalarField div1 = divergence(cp.g, tcal_t);

  VectorField div1_t(g);
  for (std::size_t p = 0; p < g.size(); ++p)
    for (int c = 0; c < 3; ++c) div1_t.c[c][p] = div1.v[p] * t.c[c][p];
  ScalarField tk = directional_derivative(t, fd.k);

  MetricElResiduals out;
  out.q1 = divergence(cp.g, div1_t);
  out.q2 = ScalarField(g);
  out.q3 = ScalarField(g);
  out.kq2 = ScalarField(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!fd.valid[p]) continue;
    const double k = fd.k.v[p];
    out.q2.v[p] = div1.v[p] -
                  (tk.v[p] / k - sfd.h_nn.v[p]) * sfd.tcal.v[p];
    out.q3.v[p] = (fd.tau.v[p] - sfd.h_bn.v[p]) * sfd.tcal.v[p];
    out.kq2.v[p] = k * div1.v[p] -
                   (tk.v[p] - k * sfd.h_nn.v[p]) * sfd.tcal.v[p];
  }
  return out;
}

RectifyingPlaneReport rectifying_plane_check(const CompatiblePair& cp,
                                             const FrenetData& fd,
                                             const SecondFundamentalData& sfd,
                                             double tol) {
  const ChartGrid& g = cp.grid();
  RectifyingPlaneReport rep;
  rep.field = ScalarField(g);
  auto mask = erode_mask(g, fd.valid, 2);
  rep.min_abs_tcal = 1e300;
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!fd.valid[p]) continue;
    rep.field.v[p] = fd.tau.v[p] - sfd.h_bn.v[p];
    if (mask[p]) {
      rep.max_on_mask = std::max(rep.max_on_mask, std::fabs(rep.field.v[p]));
      rep.min_abs_tcal = std::min(rep.min_abs_tcal, std::fabs(sfd.tcal.v[p]));
    }
  }
  rep.verdict = rep.max_on_mask <= tol;
  if (g.fully_periodic()) rep.gv = gv_direct(cp.dp);
  return rep;
}

MetricField perturb_metric(const CompatiblePair& cp, const VectorField& e1,
                           const VectorField& e2,
                           const FrameMetricVariation& s, double t) {
  const ChartGrid& g = cp.grid();
  KForm tf = flat(cp.g, cp.dp.T);
  KForm e1f = flat(cp.g, e1);
  KForm e2f = flat(cp.g, e2);
  MetricField out = cp.g;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double tfv[3] = {tf.c[0][p], tf.c[1][p], tf.c[2][p]};
    const double e1v[3] = {e1f.c[0][p], e1f.c[1][p], e1f.c[2][p]};
    const double e2v[3] = {e2f.c[0][p], e2f.c[1][p], e2f.c[2][p]};
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        double sv = s.s_tt.v[p] * tfv[i] * tfv[j] +
                    s.s_nn.v[p] * e1v[i] * e1v[j] +
                    s.s_bb.v[p] * e2v[i] * e2v[j] +
                    s.s_tn.v[p] * (tfv[i] * e1v[j] + e1v[i] * tfv[j]) +
                    s.s_tb.v[p] * (tfv[i] * e2v[j] + e2v[i] * tfv[j]) +
                    s.s_nb.v[p] * (e1v[i] * e2v[j] + e2v[i] * e1v[j]);
        out.g[MetricField::sym_index(i, j)][p] += t * sv;
      }
  }
  return out;
}

CompatiblePair renormalized_pair(const KForm& omega, MetricField g) {
  MetricField gm = std::move(g);
  VectorField n = sharp(gm, omega);
  ScalarField nn = metric_dot(gm, n, n);
  const ChartGrid& grid = omega.grid;
  DistributionPair dp;
  dp.T = VectorField(grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double inv = 1.0 / std::sqrt(nn.v[p]);
    for (int c = 0; c < 3; ++c) dp.T.c[c][p] = n.c[c][p] * inv;
  }
  dp.omega = flat(gm, dp.T);
  return CompatiblePair{std::move(dp), std::move(gm)};
}

double metric_functional(const KForm& omega, const MetricField& g) {
  CompatiblePair cp = renormalized_pair(omega, g);
  return gv_direct(cp.dp);
}

MetricFdResult metric_variation_fd(const CompatiblePair& cp,
                                   const VectorField& e1,
                                   const VectorField& e2,
                                   const FrameMetricVariation& s, double dt,
                                   int order) {
  auto j_at = [&](double t) {
    return metric_functional(cp.dp.omega, perturb_metric(cp, e1, e2, s, t));
  };
  const double jm2 = j_at(-2 * dt), jm1 = j_at(-dt), jp1 = j_at(dt),
               jp2 = j_at(2 * dt);
  MetricFdResult r;
  if (order == 1) {
    const double d1 = (jp1 - jm1) / (2 * dt);
    const double d2 = (jp2 - jm2) / (4 * dt);
    r.raw = d1;
    r.richardson = (4.0 * d1 - d2) / 3.0;
  } else {
    const double j0 = j_at(0.0);
    const double s1 = (jp1 - 2 * j0 + jm1) / (dt * dt);
    const double s2 = (jp2 - 2 * j0 + jm2) / (4 * dt * dt);
    r.raw = s1;
    r.richardson = (4.0 * s1 - s2) / 3.0;
  }
  return r;
}

double metric_el_pairing(const CompatiblePair& cp, const FrenetData& fd,
                         const MetricElResiduals& q,
                         const FrameMetricVariation& s) {
  // dJ/dt = int (+2 Q1 s_tt - 4 k Q2 s_tn + 4 k Q3 s_tb) dV_g.
  // The constants are pinned against the finite-difference oracle:
  // differentiating g_t(T_t,T_t) = 1 gives fdot = +S_TT/2, which fixes the
  // +2, and the S_TB coefficient follows from T_{Xdot,N} = S_TB T_{N,B}.
  const ChartGrid& g = cp.grid();
  ScalarField sq = sqrt_det(cp.g);
  KForm integrand(g, 3);
  for (std::size_t p = 0; p < g.size(); ++p) {
    double v = 2.0 * q.q1.v[p] * s.s_tt.v[p];
    if (fd.valid[p]) {
      v += -4.0 * fd.k.v[p] * q.q2.v[p] * s.s_tn.v[p] +
           4.0 * fd.k.v[p] * q.q3.v[p] * s.s_tb.v[p];
    }
    integrand.c[0][p] = v * sq.v[p];
  }
  return integrate_3form(integrand);
}

}  // namespace gvlab
