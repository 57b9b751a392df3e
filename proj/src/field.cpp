#include "axibouss/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace axibouss {

std::pair<double, double> HalfPlaneGrid::snap(double r_in, double z_in) const {
  int j = static_cast<int>(std::floor(r_in / dr));
  int i = static_cast<int>(std::floor((z_in - z_min) / dz));
  j = std::clamp(j, 0, nr - 1);
  i = std::clamp(i, 0, nz - 1);
  // floor gives the cell containing the point; compare with the neighbor
  auto closer = [](double x, double a, double b) {
    return std::abs(x - a) <= std::abs(x - b);
  };
  if (j + 1 < nr && !closer(r_in, r(j), r(j + 1))) ++j;
  if (i + 1 < nz && !closer(z_in, z(i), z(i + 1))) ++i;
  return {r(j), z(i)};
}

ScalarField ScalarField::sample(const HalfPlaneGrid& g,
                                const std::function<double(double, double)>& f) {
  ScalarField out(g);
  for (int i = 0; i < g.nz; ++i) {
    const double zi = g.z(i);
    for (int j = 0; j < g.nr; ++j) out.values(j, i) = f(g.r(j), zi);
  }
  return out;
}

double VectorField::max_speed_over_h() const {
  const double a = vr.cwiseAbs().maxCoeff() / grid.dr;
  const double b = vz.cwiseAbs().maxCoeff() / grid.dz;
  return std::max(a, b);
}

namespace {

void check_exponent(double p) {
  if (!(p >= 1.0))
    throw std::invalid_argument("lp norm: exponent must satisfy p >= 1");
}

bool is_inf(double p) { return std::isinf(p); }

}  // namespace

double lp_norm_omega(const ScalarField& f, double p) {
  check_exponent(p);
  if (is_inf(p)) return f.values.cwiseAbs().maxCoeff();
  const double area = f.grid.cell_area();
  if (p == 1.0) return f.values.cwiseAbs().sum() * area;
  if (p == 2.0) return std::sqrt(f.values.squaredNorm() * area);
  double acc = 0.0;
  for (int i = 0; i < f.grid.nz; ++i)
    for (int j = 0; j < f.grid.nr; ++j)
      acc += std::pow(std::abs(f.values(j, i)), p);
  return std::pow(acc * area, 1.0 / p);
}

double lp_norm_r3(const ScalarField& f, double p) {
  check_exponent(p);
  if (is_inf(p)) return f.values.cwiseAbs().maxCoeff();
  const double area = f.grid.cell_area();
  double acc = 0.0;
  for (int i = 0; i < f.grid.nz; ++i)
    for (int j = 0; j < f.grid.nr; ++j) {
      const double w = 2.0 * M_PI * f.grid.r(j);
      acc += std::pow(std::abs(f.values(j, i)), p) * w;
    }
  return std::pow(acc * area, 1.0 / p);
}

double weighted_lp_norm(const ScalarField& f, double alpha, double p) {
  if (std::abs(alpha) > 2.0)
    throw std::invalid_argument("weighted_lp_norm: |alpha| <= 2 required");
  if (alpha == 0.0) return lp_norm_omega(f, p);
  ScalarField g(f.grid);
  for (int i = 0; i < f.grid.nz; ++i)
    for (int j = 0; j < f.grid.nr; ++j)
      g.values(j, i) = std::pow(f.grid.r(j), alpha) * f.values(j, i);
  return lp_norm_omega(g, p);
}

double pair_field_testfn(const ScalarField& f,
                         const std::function<double(double, double)>& psi,
                         PairingMeasure measure) {
  const double area = f.grid.cell_area();
  double acc = 0.0;
  for (int i = 0; i < f.grid.nz; ++i) {
    const double zi = f.grid.z(i);
    for (int j = 0; j < f.grid.nr; ++j) {
      const double rj = f.grid.r(j);
      double w = (measure == PairingMeasure::r3) ? 2.0 * M_PI * rj : 1.0;
      acc += f.values(j, i) * psi(rj, zi) * w;
    }
  }
  return acc * area;
}

void save_field_csv(const ScalarField& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "r,z,value\n";
  char buf[128];
  for (int i = 0; i < f.grid.nz; ++i)
    for (int j = 0; j < f.grid.nr; ++j) {
      std::snprintf(buf, sizeof(buf), "%.15g,%.15g,%.15g\n", f.grid.r(j),
                    f.grid.z(i), f.values(j, i));
      out << buf;
    }
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

ScalarField load_field_csv(const std::string& path, const HalfPlaneGrid& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open field csv: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("r,z,value", 0) != 0)
    throw std::runtime_error("field csv missing r,z,value header: " + path);
  ScalarField out(grid);
  const double tol = 1e-9 * std::max(grid.dr, grid.dz);
  long rows = 0;
  for (int i = 0; i < grid.nz; ++i)
    for (int j = 0; j < grid.nr; ++j) {
      if (!std::getline(in, line))
        throw std::runtime_error("field csv truncated: " + path);
      double r, z, v;
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r, &z, &v) != 3)
        throw std::runtime_error("field csv bad row: " + line);
      if (std::abs(r - grid.r(j)) > tol || std::abs(z - grid.z(i)) > tol)
        throw std::runtime_error("field csv does not match the target grid: " +
                                 path);
      out.values(j, i) = v;
      ++rows;
    }
  (void)rows;
  return out;
}

}  // namespace axibouss
