#include "axibouss/semigroups.hpp"

#include <cmath>
#include <stdexcept>

#include "axibouss/bessel.hpp"

namespace axibouss {

namespace {

void check_time(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("semigroup: t > 0 required");
}

void check_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!a.grid.same_as(b.grid))
    throw std::invalid_argument("semigroup: component grids differ");
}

double heat1d(double t, double x) {
  return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * M_PI * t);
}

// Single-column kernels for atom sources (no quadrature weights).
Eigen::VectorXd s1_radial_column(double t, const HalfPlaneGrid& g,
                                 double r_src) {
  Eigen::VectorXd col = Eigen::VectorXd::Zero(g.nr);
  const double cut = kKernelTruncation * std::sqrt(t);
  for (int j = 0; j < g.nr; ++j) {
    const double r = g.r(j);
    const double d = r - r_src;
    if (std::abs(d) > cut) continue;
    const double s = r * r_src / (2.0 * t);
    col(j) = (r_src / (2.0 * t)) * std::exp(-d * d / (4.0 * t)) *
             scaled_bessel_i1(s);
  }
  return col;
}

Eigen::VectorXd s2_radial_column(double t, const HalfPlaneGrid& g,
                                 double r_src) {
  Eigen::VectorXd col = Eigen::VectorXd::Zero(g.nr);
  const double cut = kKernelTruncation * std::sqrt(t);
  for (int j = 0; j < g.nr; ++j) {
    const double r = g.r(j);
    const double d = r - r_src;
    if (std::abs(d) > cut) continue;
    const double s = r * r_src / (2.0 * t);
    col(j) = std::exp(-d * d / (4.0 * t)) * scaled_bessel_i0(s) / (2.0 * t);
  }
  return col;
}

Eigen::VectorXd z_column(double t, const HalfPlaneGrid& g, double z_src) {
  Eigen::VectorXd col = Eigen::VectorXd::Zero(g.nz);
  const double cut = kKernelTruncation * std::sqrt(t);
  for (int i = 0; i < g.nz; ++i) {
    const double d = g.z(i) - z_src;
    if (std::abs(d) > cut) continue;
    col(i) = heat1d(t, d);
  }
  return col;
}

ScalarField finite_or_throw(ScalarField f, const char* what) {
  if (!f.finite()) throw std::runtime_error(std::string(what) + ": non-finite output");
  return f;
}

}  // namespace

KernelSet build_kernels(double t, const HalfPlaneGrid& target,
                        const HalfPlaneGrid& source) {
  check_time(t);
  KernelSet k;
  k.t = t;
  k.target = target;
  k.source = source;
  const double cut = kKernelTruncation * std::sqrt(t);
  const double inv4t2 = 1.0 / (4.0 * t * t);

  k.a1 = Eigen::MatrixXd::Zero(target.nr, source.nr);
  k.a1g = Eigen::MatrixXd::Zero(target.nr, source.nr);
  k.a2 = Eigen::MatrixXd::Zero(target.nr, source.nr);
  k.a2g = Eigen::MatrixXd::Zero(target.nr, source.nr);
  for (int j = 0; j < target.nr; ++j) {
    const double r = target.r(j);
    for (int jj = 0; jj < source.nr; ++jj) {
      const double rs = source.r(jj);
      const double d = r - rs;
      if (std::abs(d) > cut) continue;
      const double gauss = std::exp(-d * d / (4.0 * t));
      const double s = r * rs / (2.0 * t);
      const double e0 = scaled_bessel_i0(s);
      const double e1 = scaled_bessel_i1(s);
      k.a1(j, jj) = (rs / (2.0 * t)) * gauss * e1 * source.dr;
      k.a1g(j, jj) = rs * gauss * inv4t2 * (r * e0 - rs * e1) * source.dr;
      k.a2(j, jj) = (rs / (2.0 * t)) * gauss * e0 * source.dr;
      k.a2g(j, jj) = rs * gauss * inv4t2 * (r * e1 - rs * e0) * source.dr;
    }
  }

  // z-kernel is Toeplitz on the equispaced grid; fill from one stencil row.
  k.b = Eigen::MatrixXd::Zero(target.nz, source.nz);
  k.bg = Eigen::MatrixXd::Zero(target.nz, source.nz);
  for (int i = 0; i < target.nz; ++i) {
    const double z = target.z(i);
    for (int ii = 0; ii < source.nz; ++ii) {
      const double d = z - source.z(ii);
      if (std::abs(d) > cut) continue;
      const double gz = heat1d(t, d);
      k.b(i, ii) = gz * source.dz;
      k.bg(i, ii) = gz * (d / (2.0 * t)) * source.dz;
    }
  }
  return k;
}

ScalarField s1_apply(double t, const MeasureOmega& src,
                     const HalfPlaneGrid& grid) {
  check_time(t);
  if (src.has_boundary_atoms())
    throw std::invalid_argument(
        "s1_apply: boundary atoms (r = 0) must be mollified first");
  ScalarField out(grid);
  for (const auto& atom : src.atoms) {
    const Eigen::VectorXd a = s1_radial_column(t, grid, atom.r);
    const Eigen::VectorXd b = z_column(t, grid, atom.z);
    out.values.noalias() += atom.weight * a * b.transpose();
  }
  if (src.density) {
    const KernelSet k = build_kernels(t, grid, src.density->grid);
    out.values.noalias() += k.a1 * src.density->values * k.b.transpose();
  }
  return finite_or_throw(std::move(out), "s1_apply");
}

ScalarField s1_apply(double t, const ScalarField& density,
                     const HalfPlaneGrid& grid) {
  MeasureOmega m;
  m.density = density;
  return s1_apply(t, m, grid);
}

ScalarField s2_apply(double t, const Measure3DAxi& src,
                     const HalfPlaneGrid& grid) {
  check_time(t);
  ScalarField out(grid);
  for (const auto& atom : src.circle_atoms) {
    const Eigen::VectorXd a = s2_radial_column(t, grid, atom.radius);
    const Eigen::VectorXd b = z_column(t, grid, atom.height);
    out.values.noalias() +=
        (atom.weight / (2.0 * M_PI)) * a * b.transpose();
  }
  if (src.density) {
    const KernelSet k = build_kernels(t, grid, src.density->grid);
    out.values.noalias() += k.a2 * src.density->values * k.b.transpose();
  }
  return finite_or_throw(std::move(out), "s2_apply");
}

ScalarField s2_apply(double t, const ScalarField& profile,
                     const HalfPlaneGrid& grid) {
  Measure3DAxi m;
  m.density = profile;
  return s2_apply(t, m, grid);
}

ScalarField s1_div_apply(const KernelSet& k, const ScalarField& fr,
                         const ScalarField& fz) {
  check_same_grid(fr, fz);
  ScalarField out(k.target);
  out.values.noalias() = -(k.a1g * fr.values * k.b.transpose());
  out.values.noalias() -= k.a1 * fz.values * k.bg.transpose();
  return finite_or_throw(std::move(out), "s1_div_apply");
}

ScalarField s2_div_apply(const KernelSet& k, const ScalarField& fr,
                         const ScalarField& fz) {
  check_same_grid(fr, fz);
  ScalarField out(k.target);
  out.values.noalias() = -(k.a2g * fr.values * k.b.transpose());
  out.values.noalias() -= k.a2 * fz.values * k.bg.transpose();
  return finite_or_throw(std::move(out), "s2_div_apply");
}

ScalarField s1_grad_r_apply(const KernelSet& k, const ScalarField& rho) {
  ScalarField out(k.target);
  out.values.noalias() = -(k.a1g * rho.values * k.b.transpose());
  return finite_or_throw(std::move(out), "s1_grad_r_apply");
}

ScalarField s1_div_apply(double t, const ScalarField& fr,
                         const ScalarField& fz) {
  return s1_div_apply(build_kernels(t, fr.grid, fr.grid), fr, fz);
}

ScalarField s2_div_apply(double t, const ScalarField& fr,
                         const ScalarField& fz) {
  return s2_div_apply(build_kernels(t, fr.grid, fr.grid), fr, fz);
}

ScalarField s1_grad_r_apply(double t, const ScalarField& rho) {
  return s1_grad_r_apply(build_kernels(t, rho.grid, rho.grid), rho);
}

}  // namespace axibouss
