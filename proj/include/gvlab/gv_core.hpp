#pragma once

#include <variant>

#include "gvlab/geometry.hpp"

namespace gvlab {

/// eta = i_T d(omega), the 1-form with d(omega) - omega ^ eta orthogonal to
/// omega ^ omega_perp for every compatible metric.
KForm eta(const DistributionPair& dp);

/// Metric-dependent construction of the same form by orthogonal projection
/// of d(omega) onto omega ^ omega_perp; used as an independent oracle for
/// the metric-independence lemma.
KForm eta_projection(const DistributionPair& dp, const MetricField& g);

/// gv = integral of eta ^ d(eta). Rejects non-periodic grids.
double gv_direct(const DistributionPair& dp);

struct GvReport {
  double gv_direct = 0.0;
  double gv_rw = 0.0;
  ScalarField pointwise_residual;  // |eta^deta + k^2 (tau - h_{B,N}) dV_g|
  double mask_fraction = 0.0;
};

/// Reinhart-Wood evaluation gv = -int k^2 (tau - h_{B,N}) dV_g with the
/// integrand zeroed off the Frenet mask, plus the pointwise residual
/// against eta ^ d(eta).
GvReport gv_reinhart_wood(const CompatiblePair& cp, double k_min);

/// Residuals of the three frame values of d(eta):
///   d(eta)(N,B) + 2 Div(T_{N,B} T)
///   d(eta)(T,B) - k (tau - h_{B,N})
///   d(eta)(T,N) - (T(k) - k h_{N,N})
/// together with the residual of eta = k N^flat, all on the valid mask.
struct DetaFrenetReport {
  ScalarField r_nb, r_tb, r_tn;
  ScalarField r_eta0;
};

DetaFrenetReport deta_frenet_check(const CompatiblePair& cp,
                                   const FrenetData& fd,
                                   const SecondFundamentalData& sfd);

struct ScaleCase { ScalarField f; };
struct ShiftCase { VectorField X; };
struct TiltCase { KForm mu; };
using TransformCase = std::variant<ScaleCase, ShiftCase, TiltCase>;

/// (omega, T) -> (e^f omega, e^{-f} T) | (omega, T+X) | (omega + mu, T).
/// Constraint violations (omega(X) != 0, mu(T) != 0) are rejected.
DistributionPair transform_pair(const DistributionPair& dp,
                                const TransformCase& tc);

struct TransformLawReport {
  double pointwise_max_residual = 0.0;  // |lhs - rhs| including exact terms
  double lhs_integral = 0.0;            // int of transformed eta ^ d eta
  double rhs_integral = 0.0;            // int of rhs with exact terms dropped
  double exact_term_integral = 0.0;     // int of the d(...) terms alone
};

/// Verifies the relation between eta ^ d(eta) before and after the
/// transformation, both pointwise (full equation) and integrally (exact
/// terms dropped by Stokes).
TransformLawReport verify_transformation_law(const DistributionPair& dp,
                                             const TransformCase& tc);

struct ConfoliationReport {
  ScalarField s_omega;  // *(omega ^ d omega)
  ScalarField s_tau;    // *(taubar ^ d taubar)
  ScalarField s_det;    // s_omega * s_tau - (*(omega ^ d taubar))^2
  bool verdict = false;
};

/// Pointwise evaluation of the three stability conditions for the
/// candidate variation field Xdot in the distribution; taubar = i_Xdot
/// d(omega).
ConfoliationReport confoliation_check(const DistributionPair& dp,
                                      const MetricField& g,
                                      const VectorField& xdot,
                                      double tol = 1e-10);

}  // namespace gvlab
