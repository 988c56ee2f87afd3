#include "gvlab/variations.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gvlab {

namespace {

KForm scaled_form(const KForm& a, const ScalarField& s) {
  KForm r = a;
  for (int c = 0; c < r.ncomp(); ++c)
    for (std::size_t p = 0; p < r.c[c].size(); ++p) r.c[c][p] *= s.v[p];
  return r;
}

}  // namespace

void VariationSpec::validate(const DistributionPair& dp) const {
  if (kind == Kind::shift) {
    if (max_abs(eval_one_form(dp.omega, X)) > 1e-12)
      throw std::invalid_argument("VariationSpec: shift requires omega(X)=0");
    if (X2 && max_abs(eval_one_form(dp.omega, *X2)) > 1e-12)
      throw std::invalid_argument("VariationSpec: shift requires omega(X2)=0");
  }
  if (kind == Kind::tilt) {
    if (max_abs(eval_one_form(mu, dp.T)) > 1e-12)
      throw std::invalid_argument("VariationSpec: tilt requires mu(T)=0");
    if (mu2 && max_abs(eval_one_form(*mu2, dp.T)) > 1e-12)
      throw std::invalid_argument("VariationSpec: tilt requires mu2(T)=0");
  }
}

DistributionPair VariationSpec::at(const DistributionPair& dp,
                                   double t) const {
  const ChartGrid& g = dp.grid();
  DistributionPair out;
  switch (kind) {
    case Kind::scale: {
      out.omega = KForm(g, 1);
      out.T = VectorField(g);
      for (std::size_t p = 0; p < g.size(); ++p) {
        double ft = t * f.v[p];
        if (f2) ft += 0.5 * t * t * f2->v[p];
        const double ef = std::exp(ft);
        for (int c = 0; c < 3; ++c) {
          out.omega.c[c][p] = ef * dp.omega.c[c][p];
          out.T.c[c][p] = dp.T.c[c][p] / ef;
        }
      }
      return out;
    }
    case Kind::shift: {
      out.omega = dp.omega;
      out.T = dp.T;
      for (int c = 0; c < 3; ++c)
        for (std::size_t p = 0; p < g.size(); ++p) {
          out.T.c[c][p] += t * X.c[c][p];
          if (X2) out.T.c[c][p] += 0.5 * t * t * X2->c[c][p];
        }
      return out;
    }
    default: {
      out.omega = dp.omega;
      out.T = dp.T;
      for (int c = 0; c < 3; ++c)
        for (std::size_t p = 0; p < g.size(); ++p) {
          out.omega.c[c][p] += t * mu.c[c][p];
          if (mu2) out.omega.c[c][p] += 0.5 * t * t * mu2->c[c][p];
        }
      return out;
    }
  }
}

KForm eta_dot(const DistributionPair& dp, const VariationSpec& vs) {
  vs.validate(dp);
  const ChartGrid& g = dp.grid();
  switch (vs.kind) {
    case VariationSpec::Kind::scale: {
      // d/dt [e^{-tf} i_T d(e^{tf} omega)] at 0 = i_T d(f omega)
      //                                           - f i_T d(omega).
      KForm fo = scaled_form(dp.omega, vs.f);
      KForm r = interior_product(dp.T, exterior_d(fo));
      KForm e = interior_product(dp.T, exterior_d(dp.omega));
      axpy(r, -1.0, scaled_form(e, vs.f));
      return r;
    }
    case VariationSpec::Kind::shift:
      return interior_product(vs.X, exterior_d(dp.omega));
    default:
      return interior_product(dp.T, exterior_d(vs.mu));
  }
  (void)g;
}

KForm eta_ddot(const DistributionPair& dp, const VariationSpec& vs) {
  vs.validate(dp);
  const ChartGrid& g = dp.grid();
  switch (vs.kind) {
    case VariationSpec::Kind::scale: {
      // f_t = t fd + (t^2/2) fdd:
      //   omega_dd = (fdd + fd^2) omega,  T_dd = (fd^2 - fdd) T.
      // eta_dd = i_T d(omega_dd) + 2 i_{T_d} d(omega_d) + i_{T_dd} d(omega)
      //        = i_T d((fdd + fd^2) omega) - 2 fd i_T d(fd omega)
      //          + (fd^2 - fdd) i_T d(omega).
      ScalarField fd = vs.f;
      ScalarField fdd = vs.f2 ? *vs.f2 : ScalarField(g);
      ScalarField w1(g), w2(g);
      for (std::size_t p = 0; p < g.size(); ++p) {
        w1.v[p] = fdd.v[p] + fd.v[p] * fd.v[p];
        w2.v[p] = fd.v[p] * fd.v[p] - fdd.v[p];
      }
      KForm r = interior_product(dp.T, exterior_d(scaled_form(dp.omega, w1)));
      KForm mid =
          interior_product(dp.T, exterior_d(scaled_form(dp.omega, fd)));
      axpy(r, -2.0, scaled_form(mid, fd));
      KForm e = interior_product(dp.T, exterior_d(dp.omega));
      axpy(r, 1.0, scaled_form(e, w2));
      return r;
    }
    case VariationSpec::Kind::shift: {
      if (vs.X2) return interior_product(*vs.X2, exterior_d(dp.omega));
      return KForm(g, 1);
    }
    default: {
      if (vs.mu2) return interior_product(dp.T, exterior_d(*vs.mu2));
      return KForm(g, 1);
    }
  }
}

double first_variation(const DistributionPair& dp, const VariationSpec& vs) {
  if (!dp.grid().fully_periodic())
    throw std::invalid_argument("first_variation: periodic grid required");
  KForm e = eta(dp);
  return 2.0 * integrate_3form(wedge(eta_dot(dp, vs), exterior_d(e)));
}

double second_variation(const DistributionPair& dp, const VariationSpec& vs) {
  if (!dp.grid().fully_periodic())
    throw std::invalid_argument("second_variation: periodic grid required");
  KForm e = eta(dp);
  KForm ed = eta_dot(dp, vs);
  KForm edd = eta_ddot(dp, vs);
  KForm integrand = wedge(edd, exterior_d(e));
  axpy(integrand, 1.0, wedge(ed, exterior_d(ed)));
  return 2.0 * integrate_3form(integrand);
}

FdVariationResult finite_difference_variation(const DistributionPair& dp,
                                              const VariationSpec& vs,
                                              double dt, int order) {
  if (!(dt > 0.0))
    throw std::invalid_argument("finite_difference_variation: dt > 0");
  if (order != 1 && order != 2)
    throw std::invalid_argument("finite_difference_variation: order 1 or 2");
  vs.validate(dp);
  auto gv_at = [&](double t) { return gv_direct(vs.at(dp, t)); };
  const double gm2 = gv_at(-2 * dt), gm1 = gv_at(-dt), gp1 = gv_at(dt),
               gp2 = gv_at(2 * dt);
  FdVariationResult r;
  r.dt = dt;
  if (order == 1) {
    const double d1 = (gp1 - gm1) / (2 * dt);
    const double d2 = (gp2 - gm2) / (4 * dt);
    r.raw = d1;
    r.richardson = (4.0 * d1 - d2) / 3.0;
    const double scale = std::max({std::fabs(gp1), std::fabs(gm1), 1e-300});
    r.cancellation_warning =
        std::fabs(gp1 - gm1) < 64 * std::numeric_limits<double>::epsilon() * scale;
  } else {
    const double g0 = gv_at(0.0);
    const double s1 = (gp1 - 2 * g0 + gm1) / (dt * dt);
    const double s2 = (gp2 - 2 * g0 + gm2) / (4 * dt * dt);
    r.raw = s1;
    r.richardson = (4.0 * s1 - s2) / 3.0;
    const double scale = std::max({std::fabs(gp1), std::fabs(g0), 1e-300});
    r.cancellation_warning =
        std::fabs(gp1 - 2 * g0 + gm1) <
        64 * std::numeric_limits<double>::epsilon() * scale;
  }
  return r;
}

double index_form(const KForm& phi, const KForm& psi) {
  if (!phi.grid.fully_periodic())
    throw std::invalid_argument("index_form: periodic grid required");
  return integrate_3form(wedge(phi, exterior_d(psi)));
}

double index_form_T(const CompatiblePair& cp, const KForm& alpha,
                    const KForm& beta) {
  if (!cp.grid().fully_periodic())
    throw std::invalid_argument("index_form_T: periodic grid required");
  if (max_abs(eval_one_form(alpha, cp.dp.T)) > 1e-10 ||
      max_abs(eval_one_form(beta, cp.dp.T)) > 1e-10)
    throw std::invalid_argument(
        "index_form_T: arguments must annihilate T");
  KForm l2 = lie_derivative(cp.dp.T,
                            lie_derivative(cp.dp.T, exterior_d(alpha)));
  return integrate_3form(wedge(l2, beta));
}

FrenetVariationResult frenet_variation_formulas(
    const CompatiblePair& cp, const FrenetData& fd,
    const SecondFundamentalData& sfd, const VariationSpec& vs) {
  const ChartGrid& g = cp.grid();
  FrenetVariationResult out;
  out.direct_value = first_variation(cp.dp, vs);

  ScalarField sq = sqrt_det(cp.g);
  VectorField tcal_t(g);
  for (std::size_t p = 0; p < g.size(); ++p)
    for (int c = 0; c < 3; ++c)
      tcal_t.c[c][p] = sfd.tcal.v[p] * cp.dp.T.c[c][p];
  ScalarField div_tcal = divergence(cp.g, tcal_t);
  ScalarField tk = directional_derivative(cp.dp.T, fd.k);

  // psi1 = k (tau - h_{B,N}), psi2 = T(k) - k h_{N,N}
  ScalarField psi1(g), psi2(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    psi1.v[p] = fd.k.v[p] * (fd.tau.v[p] - sfd.h_bn.v[p]);
    psi2.v[p] = tk.v[p] - fd.k.v[p] * sfd.h_nn.v[p];
  }

  KForm integrand(g, 3);
  switch (vs.kind) {
    case VariationSpec::Kind::scale: {
      // T_t = T + phi_t T with phi_dot = -f_dot:
      // gv' = 4 int T(phi_dot) Div(T_{N,B} T) dV.
      ScalarField tf = directional_derivative(cp.dp.T, vs.f);
      for (std::size_t p = 0; p < g.size(); ++p)
        integrand.c[0][p] = fd.valid[p]
                                ? -4.0 * tf.v[p] * div_tcal.v[p] * sq.v[p]
                                : 0.0;
      break;
    }
    case VariationSpec::Kind::shift: {
      // gv' = 4 int < k Div(T_{N,B} T) N - psi2 T_{N,B} N
      //               - psi1 T_{N,B} B, Xdot > dV.
      VectorField w(g);
      for (std::size_t p = 0; p < g.size(); ++p) {
        const double cn =
            fd.k.v[p] * div_tcal.v[p] - psi2.v[p] * sfd.tcal.v[p];
        const double cb = -psi1.v[p] * sfd.tcal.v[p];
        for (int c = 0; c < 3; ++c)
          w.c[c][p] = cn * fd.N.c[c][p] + cb * fd.B.c[c][p];
      }
      ScalarField dot = metric_dot(cp.g, w, vs.X);
      for (std::size_t p = 0; p < g.size(); ++p)
        integrand.c[0][p] =
            fd.valid[p] ? 4.0 * dot.v[p] * sq.v[p] : 0.0;
      break;
    }
    default: {
      // gv' = 2 int < (sigma1 psi2 - T(psi2) + tau psi1) B
      //              + (T(psi1) - sigma1 psi1 + tau psi2) N
      //              - psi2 A(B) + psi1 A(N), mu_dot^sharp > dV,
      // from d(mu)(T,X) = <nabla_T mu# - A* mu#, X> and <A* mu#, X> =
      // <mu#, A X>; here A(N) = h_{N,N} N + h_{N,B} B and
      // A(B) = h_{B,N} N + h_{B,B} B.
      ScalarField tpsi1 = directional_derivative(cp.dp.T, psi1);
      ScalarField tpsi2 = directional_derivative(cp.dp.T, psi2);
      VectorField w(g);
      for (std::size_t p = 0; p < g.size(); ++p) {
        const double cb = sfd.sigma1.v[p] * psi2.v[p] - tpsi2.v[p] +
                          fd.tau.v[p] * psi1.v[p];
        const double cn = tpsi1.v[p] - sfd.sigma1.v[p] * psi1.v[p] +
                          fd.tau.v[p] * psi2.v[p];
        const double an = -psi2.v[p] * sfd.h_bn.v[p] +
                          psi1.v[p] * sfd.h_nn.v[p];
        const double ab = -psi2.v[p] * sfd.h_bb.v[p] +
                          psi1.v[p] * sfd.h_nb.v[p];
        for (int c = 0; c < 3; ++c)
          w.c[c][p] = (cn + an) * fd.N.c[c][p] + (cb + ab) * fd.B.c[c][p];
      }
      VectorField musharp = sharp(cp.g, vs.mu);
      ScalarField dot = metric_dot(cp.g, w, musharp);
      for (std::size_t p = 0; p < g.size(); ++p)
        integrand.c[0][p] =
            fd.valid[p] ? 2.0 * dot.v[p] * sq.v[p] : 0.0;
      break;
    }
  }
  out.frenet_value = integrate_3form(integrand);
  return out;
}

}  // namespace gvlab
