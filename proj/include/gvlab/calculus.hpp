#pragma once

#include "gvlab/fields.hpp"

namespace gvlab {

/// d/dx_axis with 4th-order stencils; axis is 1-based (1,2,3) to match the
/// coordinate names x1,x2,x3.
ScalarField partial_derivative(const ScalarField& f, int axis);

/// Exterior derivative; raises degree by one. Degree-3 input is rejected.
KForm exterior_d(const KForm& a);

/// Graded-antisymmetric wedge product in the fixed component bases.
/// Total degree above 3 is rejected.
KForm wedge(const KForm& a, const KForm& b);

/// Interior product (contraction of the first slot); degree-0 input is
/// rejected.
KForm interior_product(const VectorField& z, const KForm& a);

/// Cartan formula: L_Z a = d(i_Z a) + i_Z(d a). Works on all degrees
/// (degree 0 reduces to i_Z df, degree 3 to d(i_Z a)).
KForm lie_derivative(const VectorField& z, const KForm& a);

/// Hodge star of a positive-definite metric, with the convention
/// a ^ b = <*a, b>_g dV_g and dV_g = sqrt(det g) dx1^dx2^dx3.
/// An indefinite point (det g <= 0) is reported with its grid location.
KForm hodge_star(const MetricField& g, const KForm& a);

/// Integral of a degree-3 form: rectangle rule on periodic axes, trapezoid
/// weights on bounded axes, deterministic summation order.
double integrate_3form(const KForm& a);

VectorField sharp(const MetricField& g, const KForm& a);   // 1-form -> vector
KForm flat(const MetricField& g, const VectorField& z);    // vector -> 1-form

// ---- pointwise evaluations used throughout the geometry layer ----------

/// Value of a 1-form on a vector field, alpha(Z), per point.
ScalarField eval_one_form(const KForm& a, const VectorField& z);

/// Value of a 2-form on a pair of vector fields, beta(X,Y), per point.
ScalarField eval_two_form(const KForm& b, const VectorField& x,
                          const VectorField& y);

/// dV_g as a KForm of degree 3 (coefficient sqrt(det g)).
KForm volume_form(const MetricField& g);

/// sqrt(det g) as a scalar field.
ScalarField sqrt_det(const MetricField& g);

/// g(X,Y) per point.
ScalarField metric_dot(const MetricField& g, const VectorField& x,
                       const VectorField& y);

}  // namespace gvlab
