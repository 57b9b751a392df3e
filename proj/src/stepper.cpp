#include "axibouss/stepper.hpp"

#include <cmath>
#include <stdexcept>

#include "axibouss/biot_savart.hpp"

namespace axibouss {

DerivedFields derived_fields(const StepperState& s) {
  const HalfPlaneGrid& g = s.omega.grid;
  DerivedFields d{ScalarField(g), ScalarField(g), ScalarField(g)};
  for (int i = 0; i < g.nz; ++i)
    for (int j = 0; j < g.nr; ++j) {
      const double r = g.r(j);
      const double pi = s.omega.values(j, i) / r;
      d.pi.values(j, i) = pi;
      d.gamma.values(j, i) = pi - 0.5 * s.rho.values(j, i);
      d.gamma_tilde.values(j, i) =
          s.omega.values(j, i) - 0.5 * r * s.rho.values(j, i);
    }
  return d;
}

ReferenceStepper::ReferenceStepper(const HalfPlaneGrid& grid,
                                   const StepperOptions& opt)
    : grid_(grid),
      opt_(opt),
      basis_(grid),
      op_gamma_(radial_op_gamma(grid)),
      op_rho_(radial_op_rho(grid)) {
  if (!(opt_.dt > 0.0)) throw std::invalid_argument("stepper: dt > 0 required");
}

StepperState ReferenceStepper::make_state(const ScalarField& omega0,
                                          const ScalarField& rho0) const {
  if (!omega0.grid.same_as(grid_) || !rho0.grid.same_as(grid_))
    throw std::invalid_argument("stepper: initial fields on the wrong grid");
  if (!omega0.finite() || !rho0.finite())
    throw std::invalid_argument("stepper: non-finite initial fields");
  StepperState s;
  s.time = 0.0;
  s.omega = omega0;
  s.rho = opt_.boussinesq ? rho0 : ScalarField(grid_);
  s.v = opt_.velocity_off ? VectorField(grid_)
                          : velocity_from_vorticity(s.omega, opt_.bs_tol);
  s.dt = opt_.dt;
  return s;
}

namespace {

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

}  // namespace

// Explicit upwind advection of an even-in-r quantity; axis ghost by even
// reflection, inflow value 0 at the outer box.
Eigen::MatrixXd ReferenceStepper::advect(const Eigen::MatrixXd& f,
                                         const VectorField& v,
                                         double dt) const {
  const int nr = grid_.nr, nz = grid_.nz;
  auto value = [&](int j, int i) -> double {
    if (j < 0) return f(0, i);  // even reflection through the axis
    if (j >= nr || i < 0 || i >= nz) return 0.0;
    return f(j, i);
  };
  Eigen::MatrixXd out(nr, nz);
  const bool limited = opt_.scheme == AdvectionScheme::minmod2;
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j < nr; ++j) {
      const double vr = v.vr(j, i), vz = v.vz(j, i);
      double dfr, dfz;
      if (limited) {
        const double c = value(j, i);
        if (vr > 0.0) {
          const double d1 = (c - value(j - 1, i)) / grid_.dr;
          const double d2 =
              (3.0 * c - 4.0 * value(j - 1, i) + value(j - 2, i)) /
              (2.0 * grid_.dr);
          dfr = minmod(d1, d2);
        } else {
          const double d1 = (value(j + 1, i) - c) / grid_.dr;
          const double d2 =
              (-3.0 * c + 4.0 * value(j + 1, i) - value(j + 2, i)) /
              (2.0 * grid_.dr);
          dfr = minmod(d1, d2);
        }
        if (vz > 0.0) {
          const double d1 = (c - value(j, i - 1)) / grid_.dz;
          const double d2 =
              (3.0 * c - 4.0 * value(j, i - 1) + value(j, i - 2)) /
              (2.0 * grid_.dz);
          dfz = minmod(d1, d2);
        } else {
          const double d1 = (value(j, i + 1) - c) / grid_.dz;
          const double d2 =
              (-3.0 * c + 4.0 * value(j, i + 1) - value(j, i + 2)) /
              (2.0 * grid_.dz);
          dfz = minmod(d1, d2);
        }
      } else {
        dfr = (vr > 0.0) ? (value(j, i) - value(j - 1, i)) / grid_.dr
                         : (value(j + 1, i) - value(j, i)) / grid_.dr;
        dfz = (vz > 0.0) ? (value(j, i) - value(j, i - 1)) / grid_.dz
                         : (value(j, i + 1) - value(j, i)) / grid_.dz;
      }
      out(j, i) = f(j, i) - dt * (vr * dfr + vz * dfz);
    }
  return out;
}

StepperState ReferenceStepper::step(const StepperState& s,
                                    double dt_cap) const {
  double dt = opt_.dt;
  if (dt_cap > 0.0) dt = std::min(dt, dt_cap);

  const double speed = opt_.velocity_off ? 0.0 : s.v.max_speed_over_h();
  if (speed * dt > opt_.cfl_limit) {
    if (!opt_.auto_dt)
      throw std::runtime_error("stepper: CFL violated, speed*dt = " +
                               std::to_string(speed * dt));
    dt = opt_.cfl_limit / speed;
    if (dt_cap > 0.0) dt = std::min(dt, dt_cap);
  }

  const HalfPlaneGrid& g = grid_;
  Eigen::MatrixXd gamma(g.nr, g.nz);
  for (int i = 0; i < g.nz; ++i)
    for (int j = 0; j < g.nr; ++j)
      gamma(j, i) = s.omega.values(j, i) / g.r(j) - 0.5 * s.rho.values(j, i);

  Eigen::MatrixXd gamma_hat =
      opt_.velocity_off ? gamma : advect(gamma, s.v, dt);
  Eigen::MatrixXd gamma_new =
      solve_separable(op_gamma_, basis_, 1.0, -dt, gamma_hat);

  StepperState out;
  out.time = s.time + dt;
  out.dt = dt;
  out.cfl = speed * dt;
  out.rho = ScalarField(g);
  if (opt_.boussinesq) {
    Eigen::MatrixXd rho_hat =
        opt_.velocity_off ? s.rho.values : advect(s.rho.values, s.v, dt);
    out.rho.values = solve_separable(op_rho_, basis_, 1.0, -dt, rho_hat);
  }
  out.omega = ScalarField(g);
  for (int i = 0; i < g.nz; ++i)
    for (int j = 0; j < g.nr; ++j)
      out.omega.values(j, i) =
          g.r(j) * (gamma_new(j, i) + 0.5 * out.rho.values(j, i));
  if (!out.omega.finite() || !out.rho.finite())
    throw std::runtime_error("stepper: non-finite state");
  out.v = opt_.velocity_off ? VectorField(g)
                            : velocity_from_vorticity(out.omega, opt_.bs_tol);

  const Eigen::MatrixXd pi =
      gamma_new + 0.5 * out.rho.values;  // omega/r on the new state
  out.max_pi = pi.maxCoeff();
  out.min_pi = pi.minCoeff();
  out.max_gamma = gamma_new.maxCoeff();
  out.min_gamma = gamma_new.minCoeff();
  return out;
}

std::vector<StepperState> ReferenceStepper::run(
    const ScalarField& omega0, const ScalarField& rho0,
    const std::vector<double>& output_times) const {
  if (output_times.empty())
    throw std::invalid_argument("stepper run: no output times");
  for (std::size_t i = 1; i < output_times.size(); ++i)
    if (!(output_times[i] > output_times[i - 1]))
      throw std::invalid_argument("stepper run: output times must increase");

  StepperState s = make_state(omega0, rho0);
  std::vector<StepperState> out;
  out.reserve(output_times.size());
  for (double target : output_times) {
    while (s.time < target - 1e-12 * target) {
      s = step(s, target - s.time);
    }
    out.push_back(s);
  }
  return out;
}

double ReferenceStepper::boundary_contamination(const ScalarField& f) {
  const HalfPlaneGrid& g = f.grid;
  double boundary = 0.0;
  for (int i = 0; i < g.nz; ++i)
    boundary = std::max(boundary, std::abs(f.values(g.nr - 1, i)));
  for (int j = 0; j < g.nr; ++j)
    boundary = std::max({boundary, std::abs(f.values(j, 0)),
                         std::abs(f.values(j, g.nz - 1))});
  const double interior = f.values.cwiseAbs().maxCoeff();
  return interior > 0.0 ? boundary / interior : 0.0;
}

}  // namespace axibouss
