#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "axibouss/measures.hpp"

using namespace axibouss;

TEST_CASE("rotation push-forward") {
  PointMeasure3D m;
  m.add(1.0, 1.0, 0.0, 0.0);
  m.add(-0.5, 0.3, -0.2, 2.0);

  const PointMeasure3D same = rotate_pushforward(m, RotationAngle(0.0));
  for (std::size_t i = 0; i < m.points.size(); ++i) {
    CHECK(same.points[i].x == doctest::Approx(m.points[i].x));
    CHECK(same.points[i].y == doctest::Approx(m.points[i].y));
  }

  const PointMeasure3D quarter =
      rotate_pushforward(m, RotationAngle(M_PI / 2.0));
  CHECK(quarter.points[0].x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(quarter.points[0].y == doctest::Approx(1.0));
  // total variation unchanged
  double tv = 0.0;
  for (const auto& p : quarter.points) tv += std::abs(p.weight);
  CHECK(tv == doctest::Approx(1.5));
}

TEST_CASE("rotation group law on pairings") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  PointMeasure3D m;
  for (int i = 0; i < 5; ++i)
    m.add(unif(rng), unif(rng), unif(rng), unif(rng));
  const double a = 1.1, b = 2.9;
  const PointMeasure3D two_steps =
      rotate_pushforward(rotate_pushforward(m, RotationAngle(a)),
                         RotationAngle(b));
  const PointMeasure3D one_step = rotate_pushforward(m, RotationAngle(a + b));
  for (const auto& phi : standard_test_bank())
    CHECK(pair_measure(two_steps, phi) ==
          doctest::Approx(pair_measure(one_step, phi)).epsilon(1e-12));
}

TEST_CASE("axisymmetry defect") {
  // single off-axis atom against phi = x: defect |cos a - 1|, max 2 at pi
  PointMeasure3D atom;
  atom.add(1.0, 1.0, 0.0, 0.0);
  std::vector<TestFn3D> bank_x = {
      [](double x, double, double) { return x; }};
  CHECK(axisymmetry_defect(atom, bank_x, 4) == doctest::Approx(2.0));

  // axis atom: invariant for any bank
  PointMeasure3D axis;
  axis.add(1.0, 0.0, 0.0, 0.7);
  CHECK(axisymmetry_defect(axis, standard_test_bank(), 8) < 1e-14);

  // antipodal pair: phi = x cannot see it, x^2 - y^2 can
  PointMeasure3D pair;
  pair.add(1.0, 1.0, 0.0, 0.0);
  pair.add(1.0, -1.0, 0.0, 0.0);
  CHECK(axisymmetry_defect(pair, bank_x, 8) < 1e-14);
  std::vector<TestFn3D> bank_quad = {
      [](double x, double y, double) { return x * x - y * y; }};
  CHECK(axisymmetry_defect(pair, bank_quad, 8) == doctest::Approx(4.0));

  // 64-point uniform ring is axisymmetric up to quadrature error
  PointMeasure3D ring;
  for (int k = 0; k < 64; ++k) {
    const double a = 2.0 * M_PI * k / 64;
    ring.add(1.0 / 64, std::cos(a), std::sin(a), 0.5);
  }
  CHECK(axisymmetry_defect(ring, standard_test_bank(), 9) < 1e-3);

  CHECK_THROWS_AS(axisymmetry_defect(ring, standard_test_bank(), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(axisymmetry_defect(ring, {}, 4), std::invalid_argument);
}

TEST_CASE("structural axisymmetry of the circle-atom class") {
  Measure3DAxi m;
  m.add_circle_atom(1.0, 1.0, 0.5);
  m.add_circle_atom(-0.3, 0.0, -1.0);  // axis point
  const HalfPlaneGrid g(3.0, -3.0, 3.0, 48, 96);
  m.density = ScalarField::sample(g, [](double r, double z) {
    return std::exp(-r * r - z * z);
  });
  CHECK(axisymmetry_defect(m, standard_test_bank(), 9) < 1e-3);
}

TEST_CASE("axisymmetrize_testfn") {
  auto odd = [](double x, double, double) { return x; };
  const TestFn3D odd_axi = axisymmetrize_testfn(odd, 16);
  CHECK(odd_axi(1.0, 0.5, -2.0) == doctest::Approx(0.0).epsilon(1e-15));

  auto invariant = [](double x, double y, double) { return x * x + y * y; };
  const TestFn3D inv_axi = axisymmetrize_testfn(invariant, 8);
  CHECK(inv_axi(0.7, -0.4, 1.0) == doctest::Approx(0.65));

  // x^2 averages to (x^2 + y^2)/2 (exact for n >= 4)
  auto xsq = [](double x, double, double) { return x * x; };
  const TestFn3D xsq_axi = axisymmetrize_testfn(xsq, 8);
  CHECK(xsq_axi(1.2, -0.3, 0.0) ==
        doctest::Approx(0.5 * (1.2 * 1.2 + 0.3 * 0.3)).epsilon(1e-14));

  // dense-angle oracle for a non-polynomial test function
  auto hard = [](double x, double y, double z) {
    return std::cos(2.0 * x + y) * std::exp(-0.1 * z * z);
  };
  const TestFn3D a64 = axisymmetrize_testfn(hard, 64);
  const TestFn3D a4096 = axisymmetrize_testfn(hard, 4096);
  CHECK(a64(1.0, 0.8, 0.3) == doctest::Approx(a4096(1.0, 0.8, 0.3)).epsilon(1e-12));

  // invariance under pre-rotation
  const double v1 = a64(1.0, 0.8, 0.3);
  const double c = std::cos(0.9), s = std::sin(0.9);
  const double v2 = a64(c * 1.0 - s * 0.8, s * 1.0 + c * 0.8, 0.3);
  CHECK(v1 == doctest::Approx(v2).epsilon(1e-12));

  CHECK_THROWS_AS(axisymmetrize_testfn(odd, 3), std::invalid_argument);
}

TEST_CASE("half-plane reduction") {
  Measure3DAxi m;
  m.add_circle_atom(1.0, 1.0, 0.5);
  const MeasureOmega plain =
      reduce_to_halfplane(m, HalfPlaneNormalization::plain);
  REQUIRE(plain.atoms.size() == 1);
  CHECK(plain.atoms[0].weight == doctest::Approx(1.0));
  CHECK(plain.atoms[0].r == doctest::Approx(1.0));
  CHECK(plain.atoms[0].z == doctest::Approx(0.5));
  CHECK_FALSE(plain.atoms[0].boundary);

  const MeasureOmega halved =
      reduce_to_halfplane(m, HalfPlaneNormalization::over_2pi);
  CHECK(halved.atoms[0].weight == doctest::Approx(0.5 / M_PI));

  // axis atom lands on the boundary and is flagged
  Measure3DAxi axis;
  axis.add_circle_atom(2.0, 0.0, -1.0);
  const MeasureOmega reduced = reduce_to_halfplane(axis, HalfPlaneNormalization::plain);
  REQUIRE(reduced.atoms.size() == 1);
  CHECK(reduced.atoms[0].boundary);
  CHECK(reduced.has_boundary_atoms());

  // density picks up the 2 pi r Jacobian pointwise
  const HalfPlaneGrid g(4.0, -2.0, 2.0, 64, 64);
  Measure3DAxi ac;
  ac.density = ScalarField::sample(g, [](double r, double z) {
    return std::exp(-r * r - z * z);
  });
  const MeasureOmega red = reduce_to_halfplane(ac, HalfPlaneNormalization::plain);
  REQUIRE(red.density.has_value());
  CHECK(red.density->values(10, 20) ==
        doctest::Approx(2.0 * M_PI * g.r(10) * ac.density->values(10, 20)));

  // empty in, empty out
  const MeasureOmega none =
      reduce_to_halfplane(Measure3DAxi{}, HalfPlaneNormalization::plain);
  CHECK(none.atoms.empty());
  CHECK_FALSE(none.density.has_value());

  Measure3DAxi bad;
  bad.circle_atoms.push_back({1.0, -0.5, 0.0});
  CHECK_THROWS_AS(reduce_to_halfplane(bad, HalfPlaneNormalization::plain),
                  std::invalid_argument);
}

TEST_CASE("tv and atomic norms, decomposition report") {
  MeasureOmega m;
  m.add_atom(1.0, 1.0, 0.0);
  m.add_atom(-0.5, 2.0, 1.0);
  CHECK(tv_norm(m) == doctest::Approx(1.5));
  CHECK(atomic_norm(m) == doctest::Approx(1.5));

  const HalfPlaneGrid g(4.0, -2.0, 2.0, 64, 64);
  MeasureOmega ac;
  // L1 mass 2: normalized bump times 2
  ac.density = ScalarField::sample(g, [](double r, double z) {
    const double d = (r - 2.0) * (r - 2.0) + z * z;
    return 2.0 * std::exp(-d / 0.02) / (0.02 * M_PI);
  });
  CHECK(tv_norm(ac) == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(atomic_norm(ac) == 0.0);

  const DecompositionReport rep = decomposition_report(ac);
  CHECK(rep.sc == 0.0);
  CHECK(rep.ac == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(rep.pp == 0.0);

  // plain reduction preserves total variation (atoms exactly, density to
  // quadrature accuracy)
  Measure3DAxi m3;
  m3.add_circle_atom(0.7, 1.2, 0.1);
  m3.add_circle_atom(-0.2, 0.4, -0.3);
  m3.density = ScalarField::sample(g, [](double r, double z) {
    return std::exp(-((r - 1.5) * (r - 1.5) + z * z) * 4.0);
  });
  const MeasureOmega red = reduce_to_halfplane(m3, HalfPlaneNormalization::plain);
  CHECK(atomic_norm(red) == doctest::Approx(atomic_norm(m3)).epsilon(1e-15));
  CHECK(tv_norm(red) == doctest::Approx(tv_norm(m3)).epsilon(1e-12));
}

TEST_CASE("measure pairings") {
  MeasureOmega dirac;
  dirac.add_atom(1.0, 1.0, 0.0);
  auto psi = [](double r, double z) { return r * r + std::cos(z); };
  CHECK(pair_measure(dirac, psi) == doctest::Approx(psi(1.0, 0.0)));

  // <mu, phi> = <mu, phi_axi> for axisymmetric measures
  Measure3DAxi m;
  m.add_circle_atom(1.0, 1.3, 0.4);
  auto phi = [](double x, double y, double z) {
    return x * x + 0.3 * x + std::sin(y) + z;
  };
  const TestFn3D phi_axi = axisymmetrize_testfn(phi, 64);
  CHECK(pair_measure(m, phi, 64) ==
        doctest::Approx(pair_measure(m, phi_axi, 64)).epsilon(1e-10));

  // <mu_tilde, psi> = <mu, psi(sqrt(x^2+y^2), z)>
  const MeasureOmega red = reduce_to_halfplane(m, HalfPlaneNormalization::plain);
  const TestFn3D lifted = [&psi](double x, double y, double z) {
    return psi(std::hypot(x, y), z);
  };
  CHECK(pair_measure(red, psi) ==
        doctest::Approx(pair_measure(m, lifted, 64)).epsilon(1e-12));
}

TEST_CASE("theta-independence of the reduced pairing") {
  Measure3DAxi m;
  m.add_circle_atom(0.8, 1.1, -0.2);
  const HalfPlaneGrid g(3.0, -2.0, 2.0, 48, 48);
  m.density = ScalarField::sample(g, [](double r, double z) {
    return std::exp(-2.0 * ((r - 1.0) * (r - 1.0) + z * z));
  });
  const MeasureOmega red = reduce_to_halfplane(m, HalfPlaneNormalization::plain);
  auto phi = [](double x, double y, double z) {
    return (x * x + y * y) * std::exp(-z * z) + x;
  };
  const TestFn3D phi_axi = axisymmetrize_testfn(phi, 64);
  const double expected = pair_measure(m, phi, 256);
  for (double theta : {0.0, 0.7, 2.2, 4.4}) {
    const double c = std::cos(theta), s = std::sin(theta);
    // psi(r,z) = phi_axi(F(r,z,theta))
    const double got = pair_measure(red, [&](double r, double z) {
      return phi_axi(r * c, r * s, z);
    });
    CHECK(got == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("boundary atoms and malformed input") {
  MeasureOmega m;
  CHECK_THROWS_AS(m.add_atom(1.0, -0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(m.add_atom(1.0, 0.0, 0.0), std::invalid_argument);
  m.add_boundary_atom(1.0, 0.5);
  CHECK(m.has_boundary_atoms());
}

TEST_CASE("measure file io") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "axibouss_measure_test";
  fs::create_directories(dir);
  const HalfPlaneGrid g(2.0, -1.0, 1.0, 16, 16);

  ScalarField dens = ScalarField::sample(g, [](double r, double z) {
    return std::exp(-r - z * z);
  });
  save_field_csv(dens, (dir / "density.csv").string());

  MeasureFileData data;
  data.omega_atoms = {{0.05, 1.0, 0.25, false}};
  data.circle_atoms = {{1.0, 0.5, -0.5}};
  data.density_path = "density.csv";
  save_measure_file((dir / "m.measure").string(), data);

  const MeasureOmega mo = measure_omega_from_file((dir / "m.measure").string(), g);
  REQUIRE(mo.atoms.size() == 1);
  CHECK(mo.atoms[0].weight == doctest::Approx(0.05));
  REQUIRE(mo.density.has_value());

  const Measure3DAxi m3 = measure_3d_from_file((dir / "m.measure").string(), g);
  REQUIRE(m3.circle_atoms.size() == 1);
  CHECK(m3.circle_atoms[0].radius == doctest::Approx(0.5));

  // unknown section rejected
  {
    std::ofstream bad((dir / "bad.measure").string());
    bad << "[atoms]\n1 1 1\n";
  }
  CHECK_THROWS_AS(load_measure_file((dir / "bad.measure").string()),
                  std::runtime_error);
  fs::remove_all(dir);
}
