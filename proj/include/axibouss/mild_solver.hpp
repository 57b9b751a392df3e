#pragma once

#include <utility>
#include <vector>

#include "axibouss/measures.hpp"
#include "axibouss/time_grid.hpp"

namespace axibouss {

// Half-plane datum for the weighted density equation.  In Boussinesq mode it
// is the 1/(2 pi) reduction of rho0; the general system takes it independent.
inline MeasureOmega boussinesq_mu(const Measure3DAxi& rho0) {
  return reduce_to_halfplane(rho0, HalfPlaneNormalization::over_2pi);
}

// Fills the trajectory with semigroup applications only:
//   (omega, rho_tilde, rho)(t_k) = (S1(t_k) omega0, S1(t_k) mu, S2(t_k) rho0)
// and the velocity recovered from the linear vorticity.
Trajectory linear_part(const MeasureOmega& omega0, const MeasureOmega& mu,
                       const Measure3DAxi& rho0, const TimeGrid& tg,
                       const HalfPlaneGrid& grid, double bs_tol = 1e-10);

// Duhamel terms at node k computed from the trajectory's own fields and
// velocity by product quadrature on the stretched grid: the (t - tau)^{-1/2}
// factor is integrated analytically on each subinterval against a
// piecewise-constant (midpoint) source.
ScalarField duhamel_F1(const Trajectory& traj, TrajField label, int k);
ScalarField duhamel_F2(const Trajectory& traj, int k);
ScalarField duhamel_G(const Trajectory& traj, int k);

struct ContractionReport {
  double a0t = 0.0;  // X/Z norm of the linear part
  double at = 0.0;   // X norm of the solution (omega + rho_tilde)
  std::vector<double> increments;  // per-sweep update size in the X/Z norms
  std::vector<double> ratios;      // successive increment ratios
  int sweeps = 0;
  bool converged = false;
  bool diverged = false;   // ratio >= 1 for three consecutive sweeps
  bool satisfied = false;  // geometric decay of the increments observed
};

struct PicardOptions {
  double tol = 1e-8;   // sup-node relative increment
  int max_sweeps = 50;
  double bs_tol = 1e-10;
};

// Picard iteration of the integral system
//   omega     = S1 omega0 - F1(omega)     - G(rho)
//   rho_tilde = S1 mu     - F1(rho_tilde) - 2 G(rho)
//   rho       = S2 rho0   - F2(rho_tilde / r)
// with the velocity refreshed from the previous sweep's vorticity.  A
// divergence report signals that the data is too large for the contraction at
// this resolution.
std::pair<Trajectory, ContractionReport> picard_solve(
    const MeasureOmega& omega0, const MeasureOmega& mu,
    const Measure3DAxi& rho0, const TimeGrid& tg, const HalfPlaneGrid& grid,
    const PicardOptions& opts = {});

struct WeakConvergenceRow {
  int test_index = 0;
  double t = 0.0;
  double gap_omega = 0.0;      // |<omega(t), psi> - <omega0, psi>|
  double gap_rho_tilde = 0.0;  // |<rho_tilde(t), psi> - <mu, psi>|
  double gap_rho = 0.0;        // |<rho(t), phi> - <rho0, phi>|, phi = psi o F
};

struct WeakConvergenceReport {
  std::vector<WeakConvergenceRow> rows;  // three smallest nodes per test
  std::vector<bool> admissible;          // finite grad/weighted norms per test
};

// Pairing gaps against the initial data at the three smallest time nodes.
// Test functions should have finite sup gradient and finite psi/r, psi/r^2
// weighted norms; violators are flagged inadmissible (and still tabulated).
WeakConvergenceReport weak_convergence_probe(
    const Trajectory& traj, const MeasureOmega& omega0, const MeasureOmega& mu,
    const Measure3DAxi& rho0, const std::vector<TestFnOmega>& bank);

}  // namespace axibouss
