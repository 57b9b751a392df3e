#pragma once

#include "axibouss/field.hpp"

namespace axibouss {

struct StreamFunction {
  HalfPlaneGrid grid;
  Eigen::MatrixXd phi;
  Eigen::MatrixXd u;  // phi / r; the variable actually solved for
  double tol = 0.0;
  double residual = 0.0;  // achieved relative residual of the discrete solve
  bool converged = false;
};

// Solves -(d_rr - (1/r) d_r + d_zz) phi = r * omega with zero Dirichlet data
// on the axis and the outer box.  Internally the substitution phi = r u turns
// the stream operator into the same five-point operator that propagates the
// vorticity (r L_omega u = L_stream (r u) identically), whose cell-centered
// axis closure is consistent for the regular phi ~ r^2 branch; the direct
// separable solve leaves a round-off residual.
StreamFunction solve_stream(const ScalarField& omega, double tol = 1e-10);

// v^r = -(1/r) d_z phi, v^z = (1/r) d_r phi by centered differences.
VectorField velocity_from_stream(const StreamFunction& psi);
VectorField velocity_from_vorticity(const ScalarField& omega,
                                    double tol = 1e-10);

struct VelocityBoundsReport {
  bool skipped = false;     // zero vorticity: ratios undefined
  double l4_over_l43 = 0.0; // ||v||_L4 / ||omega||_{L^{4/3}}
  double linf_ratio = 0.0;  // ||v||_inf / (||omega||_m^alpha ||omega||_l^(1-alpha))
  double m = 1.5;
  double l = 4.0;
  double alpha = 0.6;       // m (l-2) / (2 (l-m)) at (m,l) = (3/2, 4)
};

VelocityBoundsReport velocity_bounds_report(const ScalarField& omega,
                                            const VectorField& v);

}  // namespace axibouss
