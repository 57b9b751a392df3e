#include "axibouss/biot_savart.hpp"

#include <cmath>
#include <stdexcept>

#include "axibouss/elliptic.hpp"

namespace axibouss {

StreamFunction solve_stream(const ScalarField& omega, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_stream: tol > 0");
  if (!omega.finite())
    throw std::invalid_argument("solve_stream: non-finite vorticity");
  const HalfPlaneGrid& g = omega.grid;

  // (L_omega (+) d_zz) u = -omega, phi = r u
  const Eigen::MatrixXd rhs = -omega.values;
  const Tridiag tr = radial_op_omega(g);
  const SineBasisZ basis(g);
  StreamFunction out;
  out.grid = g;
  out.tol = tol;
  out.u = solve_separable(tr, basis, 0.0, 1.0, rhs);
  out.phi.resize(g.nr, g.nz);
  for (int i = 0; i < g.nz; ++i)
    for (int j = 0; j < g.nr; ++j) out.phi(j, i) = g.r(j) * out.u(j, i);

  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    out.residual = 0.0;
    out.converged = true;
    return out;
  }
  out.residual = (apply_separable(tr, g, out.u) - rhs).norm() / rhs_norm;
  out.converged = out.residual <= tol;
  return out;
}

VectorField velocity_from_stream(const StreamFunction& psi) {
  const HalfPlaneGrid& g = psi.grid;
  if (g.nr < 3 || g.nz < 3)
    throw std::invalid_argument("velocity_from_stream: grid too small");
  VectorField v(g);
  // v^r = -(1/r) d_z phi = -d_z u and v^z = (1/r) d_r (r u) = d_r u + u/r:
  // working in u avoids dividing discretization error by r near the axis.
  // Centered differences; odd ghosts (-u) across the axis and the outer
  // faces, matching the Dirichlet data of the solve.
  auto u_at = [&](int j, int i) -> double {
    if (j < 0) return -psi.u(0, i);
    if (j >= g.nr) return -psi.u(g.nr - 1, i);
    if (i < 0) return -psi.u(j, 0);
    if (i >= g.nz) return -psi.u(j, g.nz - 1);
    return psi.u(j, i);
  };
  for (int i = 0; i < g.nz; ++i)
    for (int j = 0; j < g.nr; ++j) {
      const double du_r = (u_at(j + 1, i) - u_at(j - 1, i)) / (2.0 * g.dr);
      const double du_z = (u_at(j, i + 1) - u_at(j, i - 1)) / (2.0 * g.dz);
      v.vr(j, i) = -du_z;
      v.vz(j, i) = du_r + psi.u(j, i) / g.r(j);
    }
  return v;
}

VectorField velocity_from_vorticity(const ScalarField& omega, double tol) {
  const StreamFunction psi = solve_stream(omega, tol);
  if (!psi.converged)
    throw std::runtime_error("velocity_from_vorticity: stream solve residual " +
                             std::to_string(psi.residual) + " exceeds tol");
  return velocity_from_stream(psi);
}

VelocityBoundsReport velocity_bounds_report(const ScalarField& omega,
                                            const VectorField& v) {
  VelocityBoundsReport rep;
  const double w43 = lp_norm_omega(omega, 4.0 / 3.0);
  if (w43 == 0.0) {
    rep.skipped = true;
    return rep;
  }
  rep.alpha = rep.m * (rep.l - 2.0) / (2.0 * (rep.l - rep.m));
  ScalarField speed(v.grid);
  speed.values = (v.vr.array().square() + v.vz.array().square()).sqrt();
  rep.l4_over_l43 = lp_norm_omega(speed, 4.0) / w43;
  const double wm = lp_norm_omega(omega, rep.m);
  const double wl = lp_norm_omega(omega, rep.l);
  rep.linf_ratio = lp_norm_omega(speed, std::numeric_limits<double>::infinity()) /
                   (std::pow(wm, rep.alpha) * std::pow(wl, 1.0 - rep.alpha));
  return rep;
}

}  // namespace axibouss
