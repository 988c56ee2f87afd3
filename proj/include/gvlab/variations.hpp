#pragma once

#include <optional>

#include "gvlab/gv_core.hpp"

namespace gvlab {

/// One-parameter families through pair space. The paths are exact:
///   scale:  omega_t = e^{f_t} omega, T_t = e^{-f_t} T,
///           f_t = t fdot + (t^2/2) fddot
///   shift:  T_t = T + t Xdot + (t^2/2) Xddot, omega_t = omega
///   tilt:   omega_t = omega + t mudot + (t^2/2) muddot, T_t = T
/// Missing second generators default to zero (pure exponential / linear
/// paths).
struct VariationSpec {
  enum class Kind { scale, shift, tilt } kind = Kind::scale;
  ScalarField f;
  VectorField X;
  KForm mu;
  std::optional<ScalarField> f2;
  std::optional<VectorField> X2;
  std::optional<KForm> mu2;

  static VariationSpec scale(ScalarField fdot) {
    VariationSpec v;
    v.kind = Kind::scale;
    v.f = std::move(fdot);
    return v;
  }
  static VariationSpec shift(VectorField xdot) {
    VariationSpec v;
    v.kind = Kind::shift;
    v.X = std::move(xdot);
    return v;
  }
  static VariationSpec tilt(KForm mudot) {
    VariationSpec v;
    v.kind = Kind::tilt;
    v.mu = std::move(mudot);
    return v;
  }

  /// Shift generators must satisfy omega(X) = 0 and tilt generators
  /// mu(T) = 0, both within 1e-12.
  void validate(const DistributionPair& dp) const;

  /// The pair at parameter value t along the exact path.
  DistributionPair at(const DistributionPair& dp, double t) const;
};

/// First t-derivative of eta_t = i_{T_t} d(omega_t) at t = 0, computed so
/// it is the exact derivative of the discrete path (the stencil d is
/// linear, so the analytic simplifications hold up to truncation but the
/// path derivative is exact).
KForm eta_dot(const DistributionPair& dp, const VariationSpec& vs);

/// Second t-derivative of eta_t at t = 0 (the Taylor-consistent
/// eta_ddot = i_T d(omega_dd) + 2 i_{T_d} d(omega_d) + i_{T_dd} d(omega)).
KForm eta_ddot(const DistributionPair& dp, const VariationSpec& vs);

/// gv'(0) = 2 int eta_dot ^ d(eta).
double first_variation(const DistributionPair& dp, const VariationSpec& vs);

/// gv''(0) = 2 int (eta_ddot ^ d(eta) + eta_dot ^ d(eta_dot)).
double second_variation(const DistributionPair& dp, const VariationSpec& vs);

struct FdVariationResult {
  double raw = 0.0;          // central difference at step dt
  double richardson = 0.0;   // extrapolated with steps dt and 2 dt
  double dt = 0.0;
  bool cancellation_warning = false;
};

/// Central finite differences of t -> gv(pair at t) along the exact path;
/// order 1 or 2 selects the first or second derivative.
FdVariationResult finite_difference_variation(const DistributionPair& dp,
                                              const VariationSpec& vs,
                                              double dt, int order);

/// I(phi, psi) = int phi ^ d(psi) on a periodic grid.
double index_form(const KForm& phi, const KForm& psi);

/// I_T(alpha, beta) = int (L_T^2 d alpha) ^ beta for alpha(T) = beta(T) = 0.
double index_form_T(const CompatiblePair& cp, const KForm& alpha,
                    const KForm& beta);

struct FrenetVariationResult {
  double frenet_value = 0.0;  // Frenet-frame first-variation formula
  double direct_value = 0.0;  // 2 int eta_dot ^ d(eta)
};

/// Evaluates the Frenet-frame expression of the first variation for the
/// given kind (integrand zeroed off the Frenet mask) next to the direct
/// value. For the scale kind the path T_t = T + phi_t T corresponds to
/// phi_dot = -f_dot.
FrenetVariationResult frenet_variation_formulas(const CompatiblePair& cp,
                                                const FrenetData& fd,
                                                const SecondFundamentalData& sfd,
                                                const VariationSpec& vs);

}  // namespace gvlab
