#pragma once

#include "gvlab/geometry.hpp"

namespace gvlab {

/// D = *(L_T^2 d) on 1-forms.
KForm jacobi_operator(const CompatiblePair& cp, const KForm& mu);

/// <D mu, nu> pairing through int (L_T^2 d mu) ^ nu; symmetric for
/// compactly supported arguments annihilating T.
double jacobi_pairing(const CompatiblePair& cp, const KForm& mu,
                      const KForm& nu);

/// Residuals of the sixth-order eigen-relations
///   p_{i,zzzzzz} - (lambda^2 / d) p_i
/// with the sixth derivative from six composed 4th-order stencils. Only
/// the z-interior (12 layers from each bounded z-boundary) is meaningful;
/// the mask marks it. Requires at least 13 interior z-points.
struct EigenResidual {
  ScalarField r1, r2;
  std::vector<std::uint8_t> interior;
};

EigenResidual eigen_residual(const ScalarField& p1, const ScalarField& p2,
                             double lambda, const ScalarField& d);

/// Background and free coefficient functions of the polynomial Jacobi-field
/// construction on a chart with T = d/dz:
///   P_i = sum_j C[i][j] z^j (j = 0..2),  p_i = sum_j c[i][j] z^j (j = 0..5)
/// with free set {c[i][0..2], c25} and the remaining five coefficients
/// determined by the vanishing of the z^0..z^4 coefficients of
/// P_1 q_{2,z} + P_2 q_{1,z}:
///   c13 = -10 c25 C10/C22, c14 = -(5/2) c25 C11/C22,
///   c23 =  10 c25 C20/C22, c24 =  (5/2) c25 C21/C22, c15 = -c25 C12/C22.
/// All coefficients are functions of (x1, x2), stored as z-constant fields.
struct JacobiFieldSpec {
  ChartGrid grid;
  std::array<std::array<ScalarField, 3>, 2> C;
  std::array<std::array<ScalarField, 3>, 2> c_free;
  ScalarField c25;

  /// Checks the background relations C20 = C10 C22 / C12,
  /// C21 = C22 C11 / C12 pointwise and that C12, C22 stay away from zero;
  /// throws naming the violated constraint.
  void validate(double tol = 1e-10, double floor = 1e-6) const;
};

struct JacobiBuildReport {
  double five_eq_max = 0.0;       // exact z-coefficient algebra
  double sixth_deriv_max = 0.0;   // exact z-algebra: p_i is a quintic
  double compat_max = 0.0;        // stencil residual of the displayed
                                  // compatibility expression (interior)
  double dmu_max = 0.0;           // ||D mu||_inf on the chart interior
  bool kernel_ok = false;         // dmu_max <= tolerance
};

struct JacobiBuildResult {
  KForm mu;
  std::array<std::array<ScalarField, 6>, 2> coeffs;  // full c[i][0..5]
  JacobiBuildReport report;
};

/// Assembles mu = p1 dx1 + p2 dx2 from the spec, verifies the five
/// constraint equations exactly in the z-coefficient algebra, and
/// evaluates ||D mu|| with the chart-compatible metric of cp (which must
/// match the spec background). Spec invariant violations are rejected.
JacobiBuildResult build_jacobi_field(const CompatiblePair& cp,
                                     const JacobiFieldSpec& spec,
                                     double tol = 1e-6);

/// Stencil evaluation of q_{2,1} - q_{1,2} - P1 q_{2,z} - P2 q_{1,z} with
/// q_i = p_{i,zz}.
ScalarField compatibility_residual(const ScalarField& p1,
                                   const ScalarField& p2,
                                   const ScalarField& P1,
                                   const ScalarField& P2);

/// Interior mask for a chart: strips `layers` cells from every bounded
/// axis boundary.
std::vector<std::uint8_t> chart_interior(const ChartGrid& g, int layers);

}  // namespace gvlab
