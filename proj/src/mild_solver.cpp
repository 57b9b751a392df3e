#include "axibouss/mild_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "axibouss/biot_savart.hpp"
#include "axibouss/semigroups.hpp"

namespace axibouss {

namespace {

// Product-quadrature data for subinterval j of the integral up to node k:
// the (t - tau)^{-1/2} moment is matched exactly by evaluating the kernel at
// an effective elapsed time (width / moment)^2.
struct Subinterval {
  double width = 0.0;
  double elapsed = 0.0;  // t_k - tau_eff
};

Subinterval subinterval(const TimeGrid& tg, int k, int j) {
  const double t = tg.node(k);
  const double lo = tg.lower(j);
  const double hi = tg.node(j);
  const double w = 2.0 * (std::sqrt(t - lo) - std::sqrt(t - hi));
  Subinterval s;
  s.width = hi - lo;
  s.elapsed = (s.width / w) * (s.width / w);
  return s;
}

Eigen::MatrixXd midpoint_source(const std::vector<Eigen::MatrixXd>& src,
                                int j) {
  if (j == 0) return src[0];
  return 0.5 * (src[j - 1] + src[j]);
}

struct SweepSources {
  // velocity * field products per node, plus the plain density
  std::vector<Eigen::MatrixXd> fr_omega, fz_omega;
  std::vector<Eigen::MatrixXd> fr_rt, fz_rt;
  std::vector<Eigen::MatrixXd> fr_rho, fz_rho;  // v * (rho_tilde / r)
  std::vector<Eigen::MatrixXd> rho;
};

SweepSources build_sources(const Trajectory& traj) {
  const int n = traj.size();
  const HalfPlaneGrid& g = traj.grid;
  Eigen::VectorXd inv_r(g.nr);
  for (int j = 0; j < g.nr; ++j) inv_r(j) = 1.0 / g.r(j);
  SweepSources s;
  s.fr_omega.resize(n);
  s.fz_omega.resize(n);
  s.fr_rt.resize(n);
  s.fz_rt.resize(n);
  s.fr_rho.resize(n);
  s.fz_rho.resize(n);
  s.rho.resize(n);
  for (int k = 0; k < n; ++k) {
    const auto& vr = traj.v[k].vr;
    const auto& vz = traj.v[k].vz;
    s.fr_omega[k] = vr.cwiseProduct(traj.omega[k].values);
    s.fz_omega[k] = vz.cwiseProduct(traj.omega[k].values);
    s.fr_rt[k] = vr.cwiseProduct(traj.rho_tilde[k].values);
    s.fz_rt[k] = vz.cwiseProduct(traj.rho_tilde[k].values);
    const Eigen::MatrixXd rt_over_r =
        inv_r.asDiagonal() * traj.rho_tilde[k].values;
    s.fr_rho[k] = vr.cwiseProduct(rt_over_r);
    s.fz_rho[k] = vz.cwiseProduct(rt_over_r);
    s.rho[k] = traj.rho[k].values;
  }
  return s;
}

ScalarField wrap(const HalfPlaneGrid& g, Eigen::MatrixXd m) {
  ScalarField f(g);
  f.values = std::move(m);
  return f;
}

double increment_norm(const Trajectory& next, const Trajectory& prev) {
  double sup = 0.0;
  for (int k = 0; k < next.size(); ++k) {
    const double t = next.tg.node(k);
    ScalarField d(next.grid);
    d.values = next.omega[k].values - prev.omega[k].values;
    double a = std::pow(t, 0.25) * lp_norm_omega(d, 4.0 / 3.0);
    d.values = next.rho_tilde[k].values - prev.rho_tilde[k].values;
    a += std::pow(t, 0.25) * lp_norm_omega(d, 4.0 / 3.0);
    d.values = next.rho[k].values - prev.rho[k].values;
    a += std::pow(t, 0.375) * lp_norm_r3(d, 4.0 / 3.0);
    sup = std::max(sup, a);
  }
  return sup;
}

}  // namespace

Trajectory linear_part(const MeasureOmega& omega0, const MeasureOmega& mu,
                       const Measure3DAxi& rho0, const TimeGrid& tg,
                       const HalfPlaneGrid& grid, double bs_tol) {
  Trajectory traj(tg, grid);
  for (int k = 0; k < traj.size(); ++k) {
    const double t = tg.node(k);
    traj.omega[k] = s1_apply(t, omega0, grid);
    traj.rho_tilde[k] = s1_apply(t, mu, grid);
    traj.rho[k] = s2_apply(t, rho0, grid);
    traj.v[k] = velocity_from_vorticity(traj.omega[k], bs_tol);
  }
  return traj;
}

ScalarField duhamel_F1(const Trajectory& traj, TrajField label, int k) {
  if (k < 0 || k >= traj.size())
    throw std::invalid_argument("duhamel_F1: node out of range");
  if (label == TrajField::rho)
    throw std::invalid_argument("duhamel_F1: label must be omega or rho_tilde");
  ScalarField out(traj.grid);
  for (int j = 0; j <= k; ++j) {
    const Subinterval s = subinterval(traj.tg, k, j);
    const KernelSet ks = build_kernels(s.elapsed, traj.grid, traj.grid);
    auto source = [&](int node) {
      const auto& f = traj.field(label, node).values;
      return std::make_pair(traj.v[node].vr.cwiseProduct(f).eval(),
                            traj.v[node].vz.cwiseProduct(f).eval());
    };
    auto [fr, fz] = source(j);
    if (j > 0) {
      auto [fr0, fz0] = source(j - 1);
      fr = 0.5 * (fr + fr0);
      fz = 0.5 * (fz + fz0);
    }
    out.values += s.width *
                  s1_div_apply(ks, wrap(traj.grid, fr), wrap(traj.grid, fz))
                      .values;
  }
  return out;
}

ScalarField duhamel_F2(const Trajectory& traj, int k) {
  if (k < 0 || k >= traj.size())
    throw std::invalid_argument("duhamel_F2: node out of range");
  const HalfPlaneGrid& g = traj.grid;
  Eigen::VectorXd inv_r(g.nr);
  for (int j = 0; j < g.nr; ++j) inv_r(j) = 1.0 / g.r(j);
  ScalarField out(g);
  for (int j = 0; j <= k; ++j) {
    const Subinterval s = subinterval(traj.tg, k, j);
    const KernelSet ks = build_kernels(s.elapsed, g, g);
    auto source = [&](int node) {
      const Eigen::MatrixXd f = inv_r.asDiagonal() * traj.rho_tilde[node].values;
      return std::make_pair(traj.v[node].vr.cwiseProduct(f).eval(),
                            traj.v[node].vz.cwiseProduct(f).eval());
    };
    auto [fr, fz] = source(j);
    if (j > 0) {
      auto [fr0, fz0] = source(j - 1);
      fr = 0.5 * (fr + fr0);
      fz = 0.5 * (fz + fz0);
    }
    out.values +=
        s.width * s2_div_apply(ks, wrap(g, fr), wrap(g, fz)).values;
  }
  return out;
}

ScalarField duhamel_G(const Trajectory& traj, int k) {
  if (k < 0 || k >= traj.size())
    throw std::invalid_argument("duhamel_G: node out of range");
  ScalarField out(traj.grid);
  for (int j = 0; j <= k; ++j) {
    const Subinterval s = subinterval(traj.tg, k, j);
    const KernelSet ks = build_kernels(s.elapsed, traj.grid, traj.grid);
    Eigen::MatrixXd rho = traj.rho[j].values;
    if (j > 0) rho = 0.5 * (rho + traj.rho[j - 1].values);
    out.values +=
        s.width * s1_grad_r_apply(ks, wrap(traj.grid, rho)).values;
  }
  return out;
}

std::pair<Trajectory, ContractionReport> picard_solve(
    const MeasureOmega& omega0, const MeasureOmega& mu,
    const Measure3DAxi& rho0, const TimeGrid& tg, const HalfPlaneGrid& grid,
    const PicardOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("picard_solve: tol > 0");

  const Trajectory lin = linear_part(omega0, mu, rho0, tg, grid, opts.bs_tol);
  ContractionReport rep;
  rep.a0t = xt_norm(lin, TrajField::omega) + xt_norm(lin, TrajField::rho_tilde) +
            zt_norm(lin);

  Trajectory traj = lin;
  const int n = traj.size();
  // rho_tilde and rho feed each other through G and F2, so the density
  // machinery is live as soon as either datum is nonzero
  const bool have_rho = tv_norm(rho0) > 0.0 || tv_norm(mu) > 0.0;

  int consecutive_growth = 0;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    const SweepSources src = build_sources(traj);
    Trajectory next(tg, grid);
    for (int k = 0; k < n; ++k) {
      Eigen::MatrixXd w_new = lin.omega[k].values;
      Eigen::MatrixXd rt_new = lin.rho_tilde[k].values;
      Eigen::MatrixXd rho_new = lin.rho[k].values;
      for (int j = 0; j <= k; ++j) {
        const Subinterval s = subinterval(tg, k, j);
        const KernelSet ks = build_kernels(s.elapsed, grid, grid);
        w_new -= s.width * s1_div_apply(ks,
                                        wrap(grid, midpoint_source(src.fr_omega, j)),
                                        wrap(grid, midpoint_source(src.fz_omega, j)))
                               .values;
        if (have_rho) {
          rt_new -= s.width * s1_div_apply(ks,
                                           wrap(grid, midpoint_source(src.fr_rt, j)),
                                           wrap(grid, midpoint_source(src.fz_rt, j)))
                                 .values;
          const Eigen::MatrixXd gterm =
              s1_grad_r_apply(ks, wrap(grid, midpoint_source(src.rho, j))).values;
          w_new -= s.width * gterm;
          rt_new -= 2.0 * s.width * gterm;
          rho_new -= s.width * s2_div_apply(ks,
                                            wrap(grid, midpoint_source(src.fr_rho, j)),
                                            wrap(grid, midpoint_source(src.fz_rho, j)))
                                 .values;
        }
      }
      next.omega[k] = wrap(grid, std::move(w_new));
      next.rho_tilde[k] = wrap(grid, std::move(rt_new));
      next.rho[k] = wrap(grid, std::move(rho_new));
      if (!next.omega[k].finite() || !next.rho_tilde[k].finite() ||
          !next.rho[k].finite()) {
        rep.diverged = true;
        rep.sweeps = sweep + 1;
        return {traj, rep};
      }
      next.v[k] = velocity_from_vorticity(next.omega[k], opts.bs_tol);
    }

    const double inc = increment_norm(next, traj);
    rep.increments.push_back(inc);
    if (rep.increments.size() >= 2) {
      const double prev = rep.increments[rep.increments.size() - 2];
      rep.ratios.push_back(prev > 0.0 ? inc / prev : 0.0);
      consecutive_growth = (rep.ratios.back() >= 1.0) ? consecutive_growth + 1 : 0;
    }
    traj = std::move(next);
    rep.sweeps = sweep + 1;

    const double scale =
        std::max(rep.a0t, xt_norm(traj, TrajField::omega) +
                              xt_norm(traj, TrajField::rho_tilde) + zt_norm(traj));
    if (inc <= opts.tol * std::max(scale, 1e-300)) {
      rep.converged = true;
      break;
    }
    if (consecutive_growth >= 3 || inc > 1e6 * std::max(scale, 1.0)) {
      rep.diverged = true;
      break;
    }
  }

  rep.at = xt_norm(traj, TrajField::omega) + xt_norm(traj, TrajField::rho_tilde);
  // geometric decay: every meaningful ratio beyond the first below one
  bool decay = rep.converged;
  for (std::size_t i = 1; i < rep.ratios.size(); ++i) {
    const double inc = rep.increments[i + 1];
    if (inc > 10.0 * opts.tol * std::max(rep.at, 1e-300) &&
        rep.ratios[i] >= 1.0)
      decay = false;
  }
  rep.satisfied = decay;
  return {traj, rep};
}

WeakConvergenceReport weak_convergence_probe(
    const Trajectory& traj, const MeasureOmega& omega0, const MeasureOmega& mu,
    const Measure3DAxi& rho0, const std::vector<TestFnOmega>& bank) {
  WeakConvergenceReport rep;
  const HalfPlaneGrid& g = traj.grid;
  const int probes = std::min(3, traj.size());

  for (std::size_t b = 0; b < bank.size(); ++b) {
    const TestFnOmega& psi = bank[b];

    // admissibility: finite grad and weighted norms; the weighted integrals
    // are probed for divergence by doubling the radial resolution
    const ScalarField samp = ScalarField::sample(g, psi);
    double grad_max = 0.0;
    for (int i = 0; i < g.nz; ++i)
      for (int j = 0; j < g.nr; ++j) {
        if (j + 1 < g.nr)
          grad_max = std::max(grad_max, std::abs(samp.values(j + 1, i) -
                                                 samp.values(j, i)) / g.dr);
        if (i + 1 < g.nz)
          grad_max = std::max(grad_max, std::abs(samp.values(j, i + 1) -
                                                 samp.values(j, i)) / g.dz);
      }
    auto weighted_l4 = [&psi](const HalfPlaneGrid& gg, double power) {
      ScalarField f = ScalarField::sample(gg, [&psi, power](double r, double z) {
        return psi(r, z) / std::pow(r, power);
      });
      return lp_norm_omega(f, 4.0);
    };
    const HalfPlaneGrid fine(g.r_max, g.z_min, g.z_max, 2 * g.nr, g.nz);
    bool ok = std::isfinite(grad_max);
    for (double power : {1.0, 2.0}) {
      const double coarse = weighted_l4(g, power);
      const double refined = weighted_l4(fine, power);
      if (!std::isfinite(refined) || refined > 1.25 * coarse + 1e-12) ok = false;
    }
    const ScalarField over_r =
        ScalarField::sample(g, [&psi](double r, double z) { return psi(r, z) / r; });
    if (!std::isfinite(lp_norm_omega(over_r, std::numeric_limits<double>::infinity())))
      ok = false;
    rep.admissible.push_back(ok);

    const TestFn3D phi = [&psi](double x, double y, double z) {
      return psi(std::hypot(x, y), z);
    };
    const double base_omega = pair_measure(omega0, psi);
    const double base_mu = pair_measure(mu, psi);
    const double base_rho = pair_measure(rho0, phi);
    for (int k = 0; k < probes; ++k) {
      WeakConvergenceRow row;
      row.test_index = static_cast<int>(b);
      row.t = traj.tg.node(k);
      row.gap_omega = std::abs(
          pair_field_testfn(traj.omega[k], psi, PairingMeasure::drdz) -
          base_omega);
      row.gap_rho_tilde = std::abs(
          pair_field_testfn(traj.rho_tilde[k], psi, PairingMeasure::drdz) -
          base_mu);
      row.gap_rho = std::abs(
          pair_field_testfn(traj.rho[k], psi, PairingMeasure::r3) - base_rho);
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace axibouss
