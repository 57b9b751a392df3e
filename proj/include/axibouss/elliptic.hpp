#pragma once

#include <Eigen/Dense>

#include "axibouss/field.hpp"

namespace axibouss {

// Tridiagonal radial operator on the cell-centered r-line.  Boundary ghost
// eliminations are folded into the end rows.
struct Tridiag {
  Eigen::VectorXd lower;  // entry j couples to j-1 (lower(0) unused)
  Eigen::VectorXd diag;
  Eigen::VectorXd upper;  // entry j couples to j+1 (upper(nr-1) unused)

  int size() const { return static_cast<int>(diag.size()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

// d_rr + (1/r) d_r - 1/r^2, odd reflection through the axis (the ghost
// coefficient there is exactly zero at cell centers), Dirichlet at r_max.
Tridiag radial_op_omega(const HalfPlaneGrid& g);

// Similarity transform diag(1/r) L_omega diag(r) = d_rr + (3/r) d_r in the
// continuum; row sums vanish and off-diagonals stay nonnegative, so the
// implicit step is monotone.
Tridiag radial_op_gamma(const HalfPlaneGrid& g);

// Flux form (1/r) d_r (r d_r .): zero flux through the axis face, Dirichlet
// at r_max.  Conserves the r dr measure up to the outer boundary flux.
Tridiag radial_op_rho(const HalfPlaneGrid& g);

// d_rr - (1/r) d_r with Dirichlet faces at both ends (stream function).
Tridiag radial_op_stream(const HalfPlaneGrid& g);

// Cell-centered z second difference with Dirichlet faces (ghost = -interior)
// diagonalized by the shifted sine family sin(k pi (i+1/2)/nz), k = 1..nz.
struct SineBasisZ {
  Eigen::MatrixXd fwd;          // coefficients = field * fwd^T along z
  Eigen::MatrixXd inv;          // field = coefficients * inv^T
  Eigen::VectorXd eigenvalues;  // of d_zz under the same ghosts
  explicit SineBasisZ(const HalfPlaneGrid& g);
};

// Second difference in z with Dirichlet ghosts, applied directly (used by
// residual checks and the operator-apply side of the solvers).
Eigen::MatrixXd apply_dzz(const HalfPlaneGrid& g, const Eigen::MatrixXd& f);

// (a I + b (T_r (+) d_zz)) u = rhs via the z sine basis and a Thomas solve
// per mode.  Direct, so the residual is at round-off.
Eigen::MatrixXd solve_separable(const Tridiag& tr, const SineBasisZ& basis,
                                double a, double b,
                                const Eigen::MatrixXd& rhs);

// (T_r (+) d_zz) f, for residuals and finite-difference oracles.
Eigen::MatrixXd apply_separable(const Tridiag& tr, const HalfPlaneGrid& g,
                                const Eigen::MatrixXd& f);

}  // namespace axibouss
