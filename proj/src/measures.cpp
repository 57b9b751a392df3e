#include "axibouss/measures.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace axibouss {

RotationAngle::RotationAngle(double a) {
  const double two_pi = 2.0 * M_PI;
  alpha = std::fmod(a, two_pi);
  if (alpha < 0.0) alpha += two_pi;
}

void MeasureOmega::add_atom(double weight, double r, double z) {
  if (r < 0.0) throw std::invalid_argument("MeasureOmega atom: r >= 0 required");
  if (r == 0.0)
    throw std::invalid_argument(
        "MeasureOmega atom at r = 0: use add_boundary_atom");
  atoms.push_back({weight, r, z, false});
}

void MeasureOmega::add_boundary_atom(double weight, double z) {
  atoms.push_back({weight, 0.0, z, true});
}

bool MeasureOmega::has_boundary_atoms() const {
  for (const auto& a : atoms)
    if (a.boundary) return true;
  return false;
}

void Measure3DAxi::add_circle_atom(double weight, double radius,
                                   double height) {
  if (radius < 0.0)
    throw std::invalid_argument("circle atom: radius >= 0 required");
  circle_atoms.push_back({weight, radius, height});
}

PointMeasure3D rotate_pushforward(const PointMeasure3D& m,
                                  RotationAngle alpha) {
  const double c = std::cos(alpha.alpha), s = std::sin(alpha.alpha);
  PointMeasure3D out;
  out.points.reserve(m.points.size());
  for (const auto& p : m.points)
    out.points.push_back({p.weight, c * p.x - s * p.y, s * p.x + c * p.y, p.z});
  return out;
}

double axisymmetry_defect(const PointMeasure3D& m,
                          const std::vector<TestFn3D>& bank, int n_angles) {
  if (n_angles < 2)
    throw std::invalid_argument("axisymmetry_defect: n_angles >= 2");
  if (bank.empty())
    throw std::invalid_argument("axisymmetry_defect: empty test bank");
  double defect = 0.0;
  for (int k = 0; k < n_angles; ++k) {
    const RotationAngle a(2.0 * M_PI * k / n_angles);
    const PointMeasure3D rotated = rotate_pushforward(m, a);
    for (const auto& phi : bank)
      defect = std::max(defect, std::abs(pair_measure(rotated, phi) -
                                         pair_measure(m, phi)));
  }
  return defect;
}

double axisymmetry_defect(const Measure3DAxi& m,
                          const std::vector<TestFn3D>& bank, int n_angles,
                          int pairing_angles) {
  if (n_angles < 2)
    throw std::invalid_argument("axisymmetry_defect: n_angles >= 2");
  if (bank.empty())
    throw std::invalid_argument("axisymmetry_defect: empty test bank");
  double defect = 0.0;
  for (int k = 0; k < n_angles; ++k) {
    const double a = 2.0 * M_PI * k / n_angles;
    const double c = std::cos(a), s = std::sin(a);
    for (const auto& phi : bank) {
      TestFn3D rotated = [c, s, &phi](double x, double y, double z) {
        return phi(c * x - s * y, s * x + c * y, z);
      };
      defect = std::max(defect,
                        std::abs(pair_measure(m, rotated, pairing_angles) -
                                 pair_measure(m, phi, pairing_angles)));
    }
  }
  return defect;
}

TestFn3D axisymmetrize_testfn(TestFn3D phi, int n_angles) {
  if (n_angles < 4)
    throw std::invalid_argument("axisymmetrize_testfn: n_angles >= 4");
  return [phi = std::move(phi), n_angles](double x, double y, double z) {
    double acc = 0.0;
    for (int k = 0; k < n_angles; ++k) {
      const double a = 2.0 * M_PI * k / n_angles;
      const double c = std::cos(a), s = std::sin(a);
      acc += phi(c * x - s * y, s * x + c * y, z);
    }
    return acc / n_angles;
  };
}

MeasureOmega reduce_to_halfplane(const Measure3DAxi& m,
                                 HalfPlaneNormalization normalization) {
  const double c =
      (normalization == HalfPlaneNormalization::plain) ? 1.0 : 0.5 / M_PI;
  MeasureOmega out;
  for (const auto& atom : m.circle_atoms) {
    if (atom.radius < 0.0)
      throw std::invalid_argument("reduce_to_halfplane: negative radius atom");
    if (atom.radius == 0.0)
      out.add_boundary_atom(c * atom.weight, atom.height);
    else
      out.add_atom(c * atom.weight, atom.radius, atom.height);
  }
  if (m.density) {
    ScalarField d(m.density->grid);
    for (int i = 0; i < d.grid.nz; ++i)
      for (int j = 0; j < d.grid.nr; ++j)
        d.values(j, i) =
            c * 2.0 * M_PI * d.grid.r(j) * m.density->values(j, i);
    out.density = std::move(d);
  }
  return out;
}

double atomic_norm(const MeasureOmega& m) {
  double acc = 0.0;
  for (const auto& a : m.atoms) acc += std::abs(a.weight);
  return acc;
}

double atomic_norm(const Measure3DAxi& m) {
  double acc = 0.0;
  for (const auto& a : m.circle_atoms) acc += std::abs(a.weight);
  return acc;
}

double tv_norm(const MeasureOmega& m) {
  double acc = atomic_norm(m);
  if (m.density) acc += lp_norm_omega(*m.density, 1.0);
  return acc;
}

double tv_norm(const Measure3DAxi& m) {
  double acc = atomic_norm(m);
  if (m.density) acc += lp_norm_r3(*m.density, 1.0);
  return acc;
}

DecompositionReport decomposition_report(const MeasureOmega& m) {
  DecompositionReport rep;
  rep.pp = atomic_norm(m);
  rep.ac = m.density ? lp_norm_omega(*m.density, 1.0) : 0.0;
  rep.sc = 0.0;
  return rep;
}

double pair_measure(const MeasureOmega& m, const TestFnOmega& psi) {
  double acc = 0.0;
  for (const auto& a : m.atoms) acc += a.weight * psi(a.r, a.z);
  if (m.density) acc += pair_field_testfn(*m.density, psi, PairingMeasure::drdz);
  return acc;
}

double pair_measure(const Measure3DAxi& m, const TestFn3D& phi, int n_angles) {
  if (n_angles < 2) throw std::invalid_argument("pair_measure: n_angles >= 2");
  auto circle_mean = [&phi, n_angles](double radius, double height) {
    double acc = 0.0;
    for (int k = 0; k < n_angles; ++k) {
      const double a = 2.0 * M_PI * k / n_angles;
      acc += phi(radius * std::cos(a), radius * std::sin(a), height);
    }
    return acc / n_angles;
  };
  double acc = 0.0;
  for (const auto& atom : m.circle_atoms)
    acc += atom.weight * circle_mean(atom.radius, atom.height);
  if (m.density) {
    const auto& d = *m.density;
    const double area = d.grid.cell_area();
    for (int i = 0; i < d.grid.nz; ++i) {
      const double z = d.grid.z(i);
      for (int j = 0; j < d.grid.nr; ++j) {
        const double r = d.grid.r(j);
        acc += d.values(j, i) * 2.0 * M_PI * r * circle_mean(r, z) * area;
      }
    }
  }
  return acc;
}

double pair_measure(const PointMeasure3D& m, const TestFn3D& phi) {
  double acc = 0.0;
  for (const auto& p : m.points) acc += p.weight * phi(p.x, p.y, p.z);
  return acc;
}

std::vector<TestFn3D> standard_test_bank() {
  auto g = [](double x, double y, double z) {
    return std::exp(-0.5 * (x * x + y * y + z * z));
  };
  std::vector<TestFn3D> bank;
  bank.push_back(g);
  bank.push_back([g](double x, double y, double z) { return x * g(x, y, z); });
  bank.push_back([g](double x, double y, double z) { return z * g(x, y, z); });
  bank.push_back(
      [g](double x, double y, double z) { return (x * x - y * y) * g(x, y, z); });
  bank.push_back(
      [g](double x, double y, double z) { return x * z * g(x, y, z); });
  bank.push_back([](double x, double y, double z) {
    return std::cos(x) * std::exp(-0.25 * (x * x + y * y + z * z));
  });
  return bank;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

MeasureFileData load_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open measure file: " + path);
  MeasureFileData data;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(path + ": malformed section at line " +
                                 std::to_string(lineno));
      section = line.substr(1, line.size() - 2);
      if (section != "omega_atoms" && section != "circle_atoms" &&
          section != "density")
        throw std::runtime_error(path + ": unknown section [" + section + "]");
      continue;
    }
    if (section == "omega_atoms" || section == "circle_atoms") {
      std::istringstream row(line);
      double w, a, b;
      if (!(row >> w >> a >> b))
        throw std::runtime_error(path + ": bad atom row at line " +
                                 std::to_string(lineno));
      if (section == "omega_atoms")
        data.omega_atoms.push_back({w, a, b, a == 0.0});
      else
        data.circle_atoms.push_back({w, a, b});
    } else if (section == "density") {
      if (!data.density_path.empty())
        throw std::runtime_error(path + ": multiple density entries");
      data.density_path = line;
    } else {
      throw std::runtime_error(path + ": data before any section at line " +
                               std::to_string(lineno));
    }
  }
  return data;
}

namespace {

std::string resolve_density(const std::string& measure_path,
                            const std::string& density_path) {
  std::filesystem::path p(density_path);
  if (p.is_absolute()) return density_path;
  return (std::filesystem::path(measure_path).parent_path() / p).string();
}

}  // namespace

MeasureOmega measure_omega_from_file(const std::string& path,
                                     const HalfPlaneGrid& grid) {
  const MeasureFileData data = load_measure_file(path);
  MeasureOmega m;
  for (const auto& a : data.omega_atoms) {
    if (a.r < 0.0) throw std::runtime_error(path + ": atom with r < 0");
    if (a.boundary)
      m.add_boundary_atom(a.weight, a.z);
    else
      m.add_atom(a.weight, a.r, a.z);
  }
  if (!data.density_path.empty())
    m.density = load_field_csv(resolve_density(path, data.density_path), grid);
  return m;
}

Measure3DAxi measure_3d_from_file(const std::string& path,
                                  const HalfPlaneGrid& grid) {
  const MeasureFileData data = load_measure_file(path);
  Measure3DAxi m;
  for (const auto& a : data.circle_atoms)
    m.add_circle_atom(a.weight, a.radius, a.height);
  if (!data.density_path.empty())
    m.density = load_field_csv(resolve_density(path, data.density_path), grid);
  return m;
}

void save_measure_file(const std::string& path, const MeasureFileData& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write measure file: " + path);
  char buf[160];
  if (!data.omega_atoms.empty()) {
    out << "[omega_atoms]\n";
    for (const auto& a : data.omega_atoms) {
      std::snprintf(buf, sizeof(buf), "%.15g %.15g %.15g\n", a.weight, a.r, a.z);
      out << buf;
    }
  }
  if (!data.circle_atoms.empty()) {
    out << "[circle_atoms]\n";
    for (const auto& a : data.circle_atoms) {
      std::snprintf(buf, sizeof(buf), "%.15g %.15g %.15g\n", a.weight, a.radius,
                    a.height);
      out << buf;
    }
  }
  if (!data.density_path.empty())
    out << "[density]\n" << data.density_path << "\n";
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace axibouss
