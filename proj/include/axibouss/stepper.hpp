#pragma once

#include <memory>
#include <vector>

#include "axibouss/elliptic.hpp"
#include "axibouss/field.hpp"

namespace axibouss {

enum class AdvectionScheme {
  upwind1,  // monotone; the only scheme admitted in max-principle runs
  minmod2,  // slope-limited second-order variant
};

struct StepperOptions {
  double dt = 1e-3;
  bool auto_dt = false;  // shrink steps to respect the CFL limit
  double cfl_limit = 0.9;
  AdvectionScheme scheme = AdvectionScheme::upwind1;
  bool boussinesq = true;    // false: pure vortex dynamics, rho frozen at 0
  bool velocity_off = false; // pure-diffusion runs
  double bs_tol = 1e-10;
};

struct StepperState {
  double time = 0.0;
  ScalarField omega;
  ScalarField rho;  // rho_tilde is derived as r * rho
  VectorField v;
  double dt = 0.0;
  double cfl = 0.0;  // CFL number recorded for the last advance
  // per-step extrema of the transported quantities
  double max_pi = 0.0, min_pi = 0.0;
  double max_gamma = 0.0, min_gamma = 0.0;
};

struct DerivedFields {
  ScalarField pi;           // omega / r
  ScalarField gamma;        // pi - rho / 2
  ScalarField gamma_tilde;  // omega - r rho / 2
};

DerivedFields derived_fields(const StepperState& s);

// IMEX integrator for the coupled vorticity-density system: the transported
// pair (Gamma, rho) with Gamma = omega/r - rho/2 obeys source-free
// drift-diffusion equations, so first-order upwind advection plus backward
// Euler diffusion keeps both discrete maximum principles exact; omega is
// reconstructed as r (Gamma + rho/2) and the velocity refreshed from it.
class ReferenceStepper {
 public:
  ReferenceStepper(const HalfPlaneGrid& grid, const StepperOptions& opt);

  StepperState make_state(const ScalarField& omega0,
                          const ScalarField& rho0) const;
  // Advances one dt (possibly shortened to dt_cap > 0).  Throws on CFL
  // violation when auto_dt is off.
  StepperState step(const StepperState& s, double dt_cap = 0.0) const;

  // Integrates to every requested output time (ascending) and returns the
  // states there.  Initial fields must be smooth; measure data is expected
  // to be mollified through the semigroups first.
  std::vector<StepperState> run(const ScalarField& omega0,
                                const ScalarField& rho0,
                                const std::vector<double>& output_times) const;

  // max |field| over the outermost cells vs the interior, for the
  // domain-truncation validity flag.
  static double boundary_contamination(const ScalarField& f);

  const StepperOptions& options() const { return opt_; }

 private:
  HalfPlaneGrid grid_;
  StepperOptions opt_;
  SineBasisZ basis_;
  Tridiag op_gamma_;
  Tridiag op_rho_;

  Eigen::MatrixXd advect(const Eigen::MatrixXd& f, const VectorField& v,
                         double dt) const;
};

}  // namespace axibouss
