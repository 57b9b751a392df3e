#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "axibouss/field.hpp"

namespace axibouss {

using TestFn3D = std::function<double(double, double, double)>;
using TestFnOmega = std::function<double(double, double)>;

// Angle reduced to [0, 2*pi).
struct RotationAngle {
  double alpha = 0.0;
  RotationAngle() = default;
  explicit RotationAngle(double a);
};

struct OmegaAtom {
  double weight = 0.0;
  double r = 0.0;
  double z = 0.0;
  bool boundary = false;  // r == 0 sits on the boundary of the half plane
};

// Finite Radon measure on the half plane: atoms plus an optional absolutely
// continuous density.  There is no singular-continuous slot; the
// decomposition report records it as identically zero.
struct MeasureOmega {
  std::vector<OmegaAtom> atoms;
  std::optional<ScalarField> density;

  MeasureOmega() = default;
  void add_atom(double weight, double r, double z);
  void add_boundary_atom(double weight, double z);
  bool has_boundary_atoms() const;
};

struct CircleAtom {
  double weight = 0.0;  // total mass carried by the circle
  double radius = 0.0;  // 0 means a point on the axis
  double height = 0.0;
};

// Axisymmetric finite measure on R^3: weighted uniform circles around the
// z-axis plus an optional axisymmetric density profile f(r,z) whose mass is
// integrated against 2*pi*r dr dz.
struct Measure3DAxi {
  std::vector<CircleAtom> circle_atoms;
  std::optional<ScalarField> density;

  Measure3DAxi() = default;
  void add_circle_atom(double weight, double radius, double height);
};

struct Point3D {
  double weight = 0.0;
  double x = 0.0, y = 0.0, z = 0.0;
};

// General (possibly non-axisymmetric) atomic measure, used to demonstrate the
// rotation push-forward.
struct PointMeasure3D {
  std::vector<Point3D> points;
  void add(double w, double x, double y, double z) {
    points.push_back({w, x, y, z});
  }
};

struct DecompositionReport {
  double ac = 0.0;
  double pp = 0.0;
  double sc = 0.0;  // structurally zero; kept so the decomposition is explicit
};

enum class HalfPlaneNormalization { plain, over_2pi };

// Image of the measure under rotation by alpha about the z-axis.
PointMeasure3D rotate_pushforward(const PointMeasure3D& m, RotationAngle alpha);

// max over sampled angles and bank entries of |<R_alpha m, phi> - <m, phi>|.
double axisymmetry_defect(const PointMeasure3D& m,
                          const std::vector<TestFn3D>& bank, int n_angles);
// Same probe for the structurally axisymmetric class, exercised through the
// pairing quadrature: |<m, phi o R_alpha> - <m, phi>|.
double axisymmetry_defect(const Measure3DAxi& m,
                          const std::vector<TestFn3D>& bank, int n_angles,
                          int pairing_angles = 64);

// phi_axi(x) = (1/2pi) int_0^{2pi} phi(R_alpha x) d alpha via the n-point
// periodic trapezoid rule (exact for trigonometric polynomials of degree < n).
TestFn3D axisymmetrize_testfn(TestFn3D phi, int n_angles);

// Half-plane reduction of an axisymmetric measure: circle atoms land at
// (radius, height), densities pick up the 2*pi*r Jacobian.  plain preserves
// total variation exactly; over_2pi divides by 2*pi (the density-side
// convention for the initial datum of r*rho).
MeasureOmega reduce_to_halfplane(const Measure3DAxi& m,
                                 HalfPlaneNormalization normalization);

double tv_norm(const MeasureOmega& m);
double tv_norm(const Measure3DAxi& m);
double atomic_norm(const MeasureOmega& m);
double atomic_norm(const Measure3DAxi& m);
DecompositionReport decomposition_report(const MeasureOmega& m);

double pair_measure(const MeasureOmega& m, const TestFnOmega& psi);
double pair_measure(const Measure3DAxi& m, const TestFn3D& phi,
                    int n_angles = 64);
double pair_measure(const PointMeasure3D& m, const TestFn3D& phi);

// Smooth bank mixing rotation-invariant and angle-dependent entries; used by
// the axisymmetry probes and the scenario gates.
std::vector<TestFn3D> standard_test_bank();

// Structured-text measure files with [omega_atoms], [circle_atoms] and
// [density] sections; density paths resolve relative to the file.
struct MeasureFileData {
  std::vector<OmegaAtom> omega_atoms;
  std::vector<CircleAtom> circle_atoms;
  std::string density_path;  // empty when absent
};

MeasureFileData load_measure_file(const std::string& path);
MeasureOmega measure_omega_from_file(const std::string& path,
                                     const HalfPlaneGrid& grid);
Measure3DAxi measure_3d_from_file(const std::string& path,
                                  const HalfPlaneGrid& grid);
void save_measure_file(const std::string& path, const MeasureFileData& data);

}  // namespace axibouss
