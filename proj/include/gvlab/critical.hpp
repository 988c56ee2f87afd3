#pragma once

#include "gvlab/gv_core.hpp"

namespace gvlab {

/// (L_T)^3 omega computed by three applications of the Lie derivative.
KForm lt3_residual(const DistributionPair& dp);

/// The two geometric Euler-Lagrange residuals equivalent (for integrable
/// distributions) to the N- and B-components of (L_T)^3 omega:
///   line N: T(T(k)) - k T(h_{N,N}) - 2 T(k) h_{N,N} - k h_{AN,N} - k tau^2
///   line B: -2 T(k (h_{B,N} - tau))
///           + k (-T(tau) + h_{AB,N} + tau (h_{AB,B} - h_{AN,N}))
/// with h_{AN,N} = h_{N,N}^2 + h_{N,B} h_{B,N},
///      h_{AB,N} = h_{B,N} (h_{N,N} + h_{B,B}),
///      h_{AB,B} = h_{B,N} h_{N,B} + h_{B,B}^2.
struct GeometricElResiduals {
  ScalarField line_n, line_b;
};

GeometricElResiduals geometric_el_residuals(const CompatiblePair& cp,
                                            const FrenetData& fd,
                                            const SecondFundamentalData& sfd);

/// Residuals of the totally-umbilical system (2 lambda = sigma1):
///   r1 = T(T(k)) - (tau^2 - lambda^2) k - T(lambda k) - lambda T(k)
///   r2 = T(k tau) + tau T(k) - 2 tau lambda
/// The umbilicity hypothesis h = lambda Id is checked first and violations
/// beyond the tolerance are rejected.
struct UmbilicResiduals {
  ScalarField r1, r2;
};

UmbilicResiduals umbilic_system_residuals(const CompatiblePair& cp,
                                          const FrenetData& fd,
                                          const SecondFundamentalData& sfd,
                                          const ScalarField& lambda,
                                          double umbilicity_tol = 1e-4);

/// Euler-Lagrange residuals of the metric functional:
///   Q1 = Div(Div(T_{N,B} T) T)                      (everywhere)
///   Q2 = Div(T_{N,B} T) - (T(k)/k - h_{N,N}) T_{N,B}  (on the mask)
///   Q3 = (tau - h_{B,N}) T_{N,B}                      (on the mask)
/// kQ2 = k Q2 is reported alongside to avoid the division where k is
/// small; both vanish together on the mask.
struct MetricElResiduals {
  ScalarField q1, q2, q3, kq2;
};

MetricElResiduals metric_el_residuals(const CompatiblePair& cp,
                                      const FrenetData& fd,
                                      const SecondFundamentalData& sfd);

struct RectifyingPlaneReport {
  ScalarField field;        // tau - h_{B,N} on the mask
  double max_on_mask = 0.0;
  double min_abs_tcal = 0.0;  // min |T_{N,B}| on the mask (hypothesis probe)
  bool verdict = false;
  double gv = 0.0;
};

RectifyingPlaneReport rectifying_plane_check(const CompatiblePair& cp,
                                             const FrenetData& fd,
                                             const SecondFundamentalData& sfd,
                                             double tol);

/// Symmetric metric perturbation given by its six components in an
/// orthonormal frame (T, E1, E2): S = s_tt T*T + s_tn (T*E1 + E1*T) + ...
struct FrameMetricVariation {
  ScalarField s_tt, s_tn, s_tb, s_nn, s_nb, s_bb;
};

/// g + t S as a metric field, with S assembled from the frame components.
MetricField perturb_metric(const CompatiblePair& cp, const VectorField& e1,
                           const VectorField& e2,
                           const FrameMetricVariation& s, double t);

/// The compatible pair over ker(omega) for a new metric: T' is the
/// g'-unit normal sharp(omega)/|sharp(omega)| and omega' = flat(T').
CompatiblePair renormalized_pair(const KForm& omega, MetricField g);

/// J_D(g') = gv of the renormalized pair (equals the Reinhart-Wood value
/// of the new compatible metric by the pointwise identity).
double metric_functional(const KForm& omega, const MetricField& g);

struct MetricFdResult {
  double raw = 0.0;
  double richardson = 0.0;
};

/// Central finite differences of t -> J_D(g + tS); order 1 or 2.
MetricFdResult metric_variation_fd(const CompatiblePair& cp,
                                   const VectorField& e1,
                                   const VectorField& e2,
                                   const FrameMetricVariation& s, double dt,
                                   int order);

/// The analytic pairing dJ/dt = int (-2 Q1 s_tt - 4 k Q2 s_tn
///                                   - 4 k Q3 s_tb) dV_g.
double metric_el_pairing(const CompatiblePair& cp, const FrenetData& fd,
                         const MetricElResiduals& q,
                         const FrameMetricVariation& s);

}  // namespace gvlab
