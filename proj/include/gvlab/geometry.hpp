#pragma once

#include <cstdint>
#include <optional>

#include "gvlab/calculus.hpp"
#include "gvlab/fields.hpp"

namespace gvlab {

/// Christoffel symbols of the second kind, Gamma^k_{ij}, symmetric in (i,j).
/// Storage: G[k*6 + sym(i,j)] with sym the packed symmetric index.
struct ChristoffelField {
  ChartGrid grid;
  std::array<std::vector<double>, 18> G;

  ChristoffelField() = default;
  explicit ChristoffelField(const ChartGrid& g) : grid(g) {
    for (auto& x : G) x.assign(g.size(), 0.0);
  }

  double at(std::size_t p, int k, int i, int j) const {
    return G[k * 6 + MetricField::sym_index(i, j)][p];
  }
};

ChristoffelField christoffel(const MetricField& g);

/// nabla_Z W in coordinates: Z^i d_i W^k + Z^i W^j Gamma^k_{ij}.
VectorField covariant_derivative(const ChristoffelField& gam,
                                 const VectorField& z, const VectorField& w);

/// Metric divergence (1/sqrt g) d_i (sqrt g Z^i).
ScalarField divergence(const MetricField& g, const VectorField& z);

/// (omega, T) with omega(T) = 1.
struct DistributionPair {
  KForm omega;   // degree 1
  VectorField T;

  const ChartGrid& grid() const { return omega.grid; }
  /// max |omega(T) - 1| over the grid.
  double pairing_defect() const;
  void validate(double tol = 1e-12) const;
};

struct CompatiblePair {
  DistributionPair dp;
  MetricField g;

  const ChartGrid& grid() const { return dp.grid(); }
  /// max over the two compatibility invariants: |flat(T) - omega| and
  /// |g(T,T) - 1|.
  double compatibility_defect() const;
  void validate(double tol = 1e-12) const;
};

struct MetricSeed {
  enum class Kind { euclidean, perturbed } kind = Kind::euclidean;
  double amplitude = 0.0;
};

/// g = omega (x) omega + seed(pi ., pi .) with pi the projection onto
/// ker(omega) along T. The perturbed seed adds a fixed smooth trigonometric
/// symmetric perturbation of the given amplitude to the Euclidean seed;
/// an amplitude that breaks positive definiteness is rejected.
CompatiblePair build_compatible_metric(const DistributionPair& dp,
                                       const MetricSeed& seed);

/// Frenet data of the T-curves. Outside the validity mask (k < k_min) the
/// frame fields and tau are zeroed and must not be read.
struct FrenetData {
  VectorField N, B;
  ScalarField k, tau;
  std::vector<std::uint8_t> valid;
  double k_min = 0.0;

  double mask_fraction() const;
};

FrenetData frenet(const CompatiblePair& cp, double k_min);

/// Shrinks a mask by the given number of cells in every axis direction so
/// stencil-based quantities are evaluated away from mask boundaries.
/// Periodic axes wrap; bounded axes also drop the outermost `layers` cells.
std::vector<std::uint8_t> erode_mask(const ChartGrid& g,
                                     const std::vector<std::uint8_t>& mask,
                                     int layers);

/// Deterministic oriented orthonormal frame (E1,E2) of ker(omega):
/// E1 is the normalized projection of the coordinate direction whose
/// omega-component is globally smallest (ties by axis index), and
/// E2 completes (T,E1) to a positively oriented g-orthonormal triple.
void aux_frame(const CompatiblePair& cp, VectorField& e1, VectorField& e2);

/// Frame policy used by curvature-dependent quantities: Frenet (N,B) on the
/// valid mask, the auxiliary frame elsewhere.
void frame_or_aux(const CompatiblePair& cp, const FrenetData& fd,
                  VectorField& x, VectorField& y);

/// Non-symmetric scalar second fundamental form h_{X,Y} = g(nabla_X Y, T)
/// evaluated on a D-frame (X,Y), its trace and the integrability tensor.
struct SecondFundamentalData {
  ScalarField h_nn, h_nb, h_bn, h_bb;
  ScalarField tcal;    // T_{N,B} = (h_{N,B} - h_{B,N}) / 2
  ScalarField sigma1;  // h_{N,N} + h_{B,B}
};

SecondFundamentalData second_fundamental(const CompatiblePair& cp,
                                         const VectorField& x,
                                         const VectorField& y);

SecondFundamentalData second_fundamental(const CompatiblePair& cp,
                                         const FrenetData& fd);

/// Coordinate bracket [Z,W]^k = Z^i d_i W^k - W^i d_i Z^k.
VectorField bracket(const VectorField& z, const VectorField& w);

/// det of the column matrix [X Y Z] times sqrt(det g): the volume form
/// evaluated on the triple, dV_g(X,Y,Z).
ScalarField volume_on_triple(const MetricField& g, const VectorField& x,
                             const VectorField& y, const VectorField& z);

/// Directional derivative T(f) = T^i d_i f.
ScalarField directional_derivative(const VectorField& t, const ScalarField& f);

}  // namespace gvlab
