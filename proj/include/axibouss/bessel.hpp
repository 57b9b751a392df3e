#pragma once

namespace axibouss {

// exp(-s) * I0(s) and exp(-s) * I1(s) for s >= 0, overflow-free for s up to
// 1e15-scale arguments.  Power series below s = 30, asymptotic expansion
// above; relative accuracy better than 1e-12 on both branches.
double scaled_bessel_i0(double s);
double scaled_bessel_i1(double s);

// Radial profile of the vorticity propagator kernel:
//   n1(tau) = sqrt(pi/tau) * exp(-1/(2 tau)) * I1(1/(2 tau)),  tau > 0,
// evaluated in scaled form.  Decreases from 1 (tau -> 0+) to 0 (tau -> inf).
double n1_profile(double tau);

}  // namespace axibouss
