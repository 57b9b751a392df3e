#pragma once

#include <Eigen/Dense>

#include "axibouss/field.hpp"
#include "axibouss/measures.hpp"

namespace axibouss {

// Shared kernel-matrix machinery for the two diffusion propagators.
//
// S1(t) solves d_t f = (Delta - 1/r^2) f on the half plane against dr dz;
// its kernel factorizes into the 1D heat kernel in z and a Bessel profile
// in r:
//   K1(t; r, r~) = (r~ / 2t) exp(-(r - r~)^2 / 4t) * [e^{-s} I1(s)],
//   s = r r~ / 2t,
// which is the same object as (1/4t) (r~/r)^{1/2} n1(t/(r r~)) G.
//
// S2(t) is the 3D axisymmetric heat flow on the (r,z) profile with radial
// kernel (1/2t) exp(-(r^2+r~^2)/4t) I0(r r~/2t) against r~ dr~.
//
// Source gradients for the div variants are moved onto the kernels
// analytically, so no discrete differentiation of the source is involved.
struct KernelSet {
  double t = 0.0;
  HalfPlaneGrid target;
  HalfPlaneGrid source;
  Eigen::MatrixXd a1;   // S1 radial kernel (includes dr weight)
  Eigen::MatrixXd a1g;  // d/dr~ of the S1 radial kernel (dr weight)
  Eigen::MatrixXd a2;   // S2 radial kernel with r~ dr~ absorbed
  Eigen::MatrixXd a2g;  // d/dr~ of the S2 radial kernel, times r~ dr~
  Eigen::MatrixXd b;    // 1D heat kernel in z (dz weight)
  Eigen::MatrixXd bg;   // d/dz~ of the z kernel (dz weight)
};

// Gaussian truncation radius (in units of sqrt(t)) for all kernel sums;
// 12 keeps the dropped tail below 1e-14 relative.
inline constexpr double kKernelTruncation = 12.0;

KernelSet build_kernels(double t, const HalfPlaneGrid& target,
                        const HalfPlaneGrid& source);

// S1(t) applied to a half-plane measure (atoms by direct kernel summation,
// densities by midpoint quadrature).  Boundary atoms (r = 0) are rejected;
// mollify them through the S2 side first.
ScalarField s1_apply(double t, const MeasureOmega& src,
                     const HalfPlaneGrid& grid);
ScalarField s1_apply(double t, const ScalarField& density,
                     const HalfPlaneGrid& grid);

// S2(t) applied to an axisymmetric 3D measure or profile; circle atoms enter
// as radial point sources, radius-0 atoms through the I0(0) = 1 limit.
ScalarField s2_apply(double t, const Measure3DAxi& src,
                     const HalfPlaneGrid& grid);
ScalarField s2_apply(double t, const ScalarField& profile,
                     const HalfPlaneGrid& grid);

// S1(t) div_*(f^r, f^z) with div_* = d_r f^r + d_z f^z.
ScalarField s1_div_apply(double t, const ScalarField& fr,
                         const ScalarField& fz);
// S2(t) div(f^r, f^z) with the full axisymmetric divergence
// d_r f^r + f^r/r + d_z f^z.
ScalarField s2_div_apply(double t, const ScalarField& fr,
                         const ScalarField& fz);
// S1(t) d_r rho, with d_r moved onto the kernel.
ScalarField s1_grad_r_apply(double t, const ScalarField& rho);

// Kernel-set flavours used by the Duhamel quadrature (kernels prebuilt once
// per subinterval, applied to several sources).
ScalarField s1_div_apply(const KernelSet& k, const ScalarField& fr,
                         const ScalarField& fz);
ScalarField s2_div_apply(const KernelSet& k, const ScalarField& fr,
                         const ScalarField& fz);
ScalarField s1_grad_r_apply(const KernelSet& k, const ScalarField& rho);

}  // namespace axibouss
