#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "axibouss/elliptic.hpp"
#include "axibouss/semigroups.hpp"

using namespace axibouss;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

MeasureOmega snapped_delta(const HalfPlaneGrid& g, double w, double r,
                           double z) {
  const auto [rs, zs] = g.snap(r, z);
  MeasureOmega m;
  m.add_atom(w, rs, zs);
  return m;
}

ScalarField gaussian_ring(const HalfPlaneGrid& g, double rc, double zc,
                          double width, double amp = 1.0) {
  return ScalarField::sample(g, [=](double r, double z) {
    const double d = (r - rc) * (r - rc) + (z - zc) * (z - zc);
    return amp * std::exp(-d / (2.0 * width * width));
  });
}

}  // namespace

TEST_CASE("s1 on a point vortex recovers unit mass as t -> 0") {
  // fine-in-r grid around the ring; tails at the box are negligible
  const HalfPlaneGrid fine(6.0, -0.5, 0.5, 1536, 256);
  const MeasureOmega delta = snapped_delta(fine, 1.0, 1.0, 0.0);
  const double m4 = lp_norm_omega(s1_apply(1e-4, delta, fine), 1.0);
  const double m3 = lp_norm_omega(s1_apply(1e-3, delta, fine), 1.0);
  CHECK(std::abs(m4 - 1.0) < 0.01);
  CHECK(m4 >= m3 - 1e-12);  // mass only leaks through the axis as t grows
  CHECK(m4 < 1.0 + 1e-9);
}

TEST_CASE("s1 measure bound: t^{1-1/q} weighted L1 stays below the data size") {
  const HalfPlaneGrid g = HalfPlaneGrid::default_desk();
  const MeasureOmega delta = snapped_delta(g, 1.0, 1.0, 0.0);
  for (double t : {1e-3, 1e-2, 0.1, 1.0}) {
    const double m = lp_norm_omega(s1_apply(t, delta, g), 1.0);
    CHECK(m <= 1.0 + 1e-6);
    // axis absorption drains mass at the rate of 1 - exp(-r0^2/4t)
    CHECK(m > 0.8 * (1.0 - std::exp(-1.0 / (4.0 * t))));
  }
}

TEST_CASE("s1 semigroup law") {
  const HalfPlaneGrid g = HalfPlaneGrid::default_desk();
  const MeasureOmega delta = snapped_delta(g, 1.0, 1.0, 0.0);
  const double t = 0.01;
  const ScalarField once = s1_apply(2.0 * t, delta, g);
  const ScalarField half = s1_apply(t, delta, g);
  const ScalarField twice = s1_apply(t, half, g);
  ScalarField diff(g);
  diff.values = once.values - twice.values;
  CHECK(lp_norm_omega(diff, 2.0) / lp_norm_omega(once, 2.0) < 1e-3);
}

TEST_CASE("s1 rejects bad input") {
  const HalfPlaneGrid g(2.0, -1.0, 1.0, 16, 16);
  MeasureOmega m;
  m.add_boundary_atom(1.0, 0.0);
  CHECK_THROWS_AS(s1_apply(0.1, m, g), std::invalid_argument);
  MeasureOmega ok;
  ok.add_atom(1.0, 1.0, 0.0);
  CHECK_THROWS_AS(s1_apply(0.0, ok, g), std::invalid_argument);
  CHECK_THROWS_AS(s1_apply(-1.0, ok, g), std::invalid_argument);
}

TEST_CASE("s2 conserves mass") {
  const HalfPlaneGrid g = HalfPlaneGrid::default_desk();
  Measure3DAxi ring;
  ring.add_circle_atom(1.0, 1.0, 0.0);
  CHECK(lp_norm_r3(s2_apply(0.02, ring, g), 1.0) ==
        doctest::Approx(1.0).epsilon(1e-6));

  // quadrature of axis-centered outputs carries the |r| kink of the 2 pi r
  // weight, so the axis atom only conserves to O(dr^2)
  Measure3DAxi axis;
  axis.add_circle_atom(2.0, 0.0, 0.5);
  CHECK(lp_norm_r3(s2_apply(0.05, axis, g), 1.0) ==
        doctest::Approx(2.0).epsilon(2e-3));

  Measure3DAxi ac;
  ac.density = gaussian_ring(g, 1.5, 0.0, 0.25);
  const double mass0 = tv_norm(ac);
  CHECK(lp_norm_r3(s2_apply(0.02, ac, g), 1.0) ==
        doctest::Approx(mass0).epsilon(1e-6));
}

TEST_CASE("s2 axis atom is the plain 3D Gaussian") {
  const HalfPlaneGrid g(4.0, -2.0, 2.0, 128, 128);
  Measure3DAxi axis;
  axis.add_circle_atom(1.0, 0.0, 0.0);
  const double t = 0.05;
  const ScalarField got = s2_apply(t, axis, g);
  const ScalarField expect = ScalarField::sample(g, [t](double r, double z) {
    return std::exp(-(r * r + z * z) / (4.0 * t)) /
           std::pow(4.0 * M_PI * t, 1.5);
  });
  ScalarField diff(g);
  diff.values = got.values - expect.values;
  CHECK(lp_norm_r3(diff, 2.0) / lp_norm_r3(expect, 2.0) < 1e-12);
}

TEST_CASE("s2 Gaussian evolves into the analytic wider Gaussian") {
  const HalfPlaneGrid g = HalfPlaneGrid::default_desk();
  const ScalarField src = ScalarField::sample(g, [](double r, double z) {
    return std::exp(-0.5 * (r * r + z * z));
  });
  const double t = 0.25;
  const ScalarField got = s2_apply(t, src, g);
  const double s2t = 1.0 + 2.0 * t;  // variance after diffusion
  const ScalarField expect = ScalarField::sample(g, [s2t](double r, double z) {
    return std::pow(s2t, -1.5) * std::exp(-0.5 * (r * r + z * z) / s2t);
  });
  ScalarField diff(g);
  diff.values = got.values - expect.values;
  CHECK(lp_norm_r3(diff, 2.0) / lp_norm_r3(expect, 2.0) < 1e-3);
}

TEST_CASE("s2 ring: weighted L2(R^3) norm stays in a band") {
  const HalfPlaneGrid g = HalfPlaneGrid::default_desk();
  Measure3DAxi ring;
  ring.add_circle_atom(1.0, 1.0, 0.0);
  double lo = kInf, hi = 0.0;
  for (double t = 1e-3; t <= 0.1 * (1 + 1e-9); t *= std::sqrt(10.0)) {
    const double v = std::pow(t, 0.75) * lp_norm_r3(s2_apply(t, ring, g), 2.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi < 0.1);       // bounded by the measure estimate
  CHECK(hi / lo < 4.0);  // no blow-up across the window
}

TEST_CASE("positivity of both kernels") {
  const HalfPlaneGrid g(4.0, -2.0, 2.0, 64, 64);
  const ScalarField src = gaussian_ring(g, 1.0, 0.3, 0.3);
  for (const ScalarField& out :
       {s1_apply(0.03, src, g), s2_apply(0.03, src, g)}) {
    CHECK(out.values.minCoeff() >= -1e-12 * out.values.maxCoeff());
    CHECK(out.values.maxCoeff() > 0.0);
  }
}

TEST_CASE("div variants: zero in, zero out") {
  const HalfPlaneGrid g(2.0, -1.0, 1.0, 24, 24);
  const ScalarField zero(g);
  CHECK(lp_norm_omega(s1_div_apply(0.05, zero, zero), 1.0) == 0.0);
  CHECK(lp_norm_omega(s2_div_apply(0.05, zero, zero), 1.0) == 0.0);
  CHECK(lp_norm_omega(s1_grad_r_apply(0.05, zero), 1.0) == 0.0);
}

TEST_CASE("div variants agree with discrete divergences of the source") {
  // kernel-gradient application vs S_i applied to a centered-difference
  // divergence; agreement improves at second order
  auto run = [](int nr, int nz) {
    const HalfPlaneGrid g(6.0, -6.0, 6.0, nr, nz);
    const ScalarField fr = gaussian_ring(g, 2.0, 0.0, 0.35);
    const ScalarField fz = gaussian_ring(g, 2.0, 0.4, 0.35, 0.7);
    const double t = 0.05;

    ScalarField div_star(g), div_full(g);
    for (int i = 0; i < g.nz; ++i)
      for (int j = 0; j < g.nr; ++j) {
        auto at = [&](const ScalarField& f, int jj, int ii) {
          if (jj < 0 || jj >= g.nr || ii < 0 || ii >= g.nz) return 0.0;
          return f.values(jj, ii);
        };
        const double dfr = (at(fr, j + 1, i) - at(fr, j - 1, i)) / (2 * g.dr);
        const double dfz = (at(fz, j, i + 1) - at(fz, j, i - 1)) / (2 * g.dz);
        div_star.values(j, i) = dfr + dfz;
        div_full.values(j, i) = dfr + dfz + fr.values(j, i) / g.r(j);
      }

    const ScalarField k1 = s1_div_apply(t, fr, fz);
    const ScalarField d1 = s1_apply(t, div_star, g);
    ScalarField e1(g);
    e1.values = k1.values - d1.values;

    const ScalarField k2 = s2_div_apply(t, fr, fz);
    const ScalarField d2 = s2_apply(t, div_full, g);
    ScalarField e2(g);
    e2.values = k2.values - d2.values;
    return std::make_pair(lp_norm_omega(e1, 2.0) / lp_norm_omega(d1, 2.0),
                          lp_norm_omega(e2, 2.0) / lp_norm_omega(d2, 2.0));
  };
  const auto [c1, c2] = run(128, 256);
  const auto [f1, f2] = run(256, 512);
  CHECK(c1 < 0.01);
  CHECK(c2 < 0.01);
  CHECK(c1 / f1 > 2.5);  // second-order convergence of the comparison
  CHECK(c2 / f2 > 2.5);
}

TEST_CASE("grad_r variant matches div with a zero z-component") {
  const HalfPlaneGrid g(4.0, -2.0, 2.0, 64, 64);
  const ScalarField rho = gaussian_ring(g, 1.5, 0.0, 0.3);
  const ScalarField zero(g);
  const ScalarField a = s1_grad_r_apply(0.04, rho);
  const ScalarField b = s1_div_apply(0.04, rho, zero);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("kernel-defined s1 solves its own discretized equation") {
  MeasureOmega delta;
  delta.add_atom(1.0, 1.0, 0.0);
  auto residual = [&](int n) {
    const HalfPlaneGrid g(4.0, -2.0, 2.0, n, n);
    const double t = 0.05, dt = 5e-5;
    const ScalarField f = s1_apply(t, delta, g);
    const ScalarField fp = s1_apply(t + dt, delta, g);
    const ScalarField fm = s1_apply(t - dt, delta, g);
    const Eigen::MatrixXd dfdt = (fp.values - fm.values) / (2.0 * dt);
    const Eigen::MatrixXd lap = apply_separable(radial_op_omega(g), g, f.values);
    return (dfdt - lap).norm() / lap.norm();
  };
  const double coarse = residual(128);
  const double fine = residual(256);
  CHECK(coarse < 0.05);
  CHECK(coarse / fine > 1.8);  // O(dr^2 + dz^2)
}
