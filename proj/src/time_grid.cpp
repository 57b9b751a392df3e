#include "axibouss/time_grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace axibouss {

TimeGrid::TimeGrid(double T_, int K_, double gamma_)
    : T(T_), K(K_), gamma(gamma_) {
  if (!(T > 0.0)) throw std::invalid_argument("TimeGrid: T > 0 required");
  if (K < 1) throw std::invalid_argument("TimeGrid: K >= 1 required");
  if (!(gamma >= 1.0)) throw std::invalid_argument("TimeGrid: gamma >= 1");
  nodes.resize(K);
  for (int k = 1; k <= K; ++k)
    nodes[k - 1] = T * std::pow(static_cast<double>(k) / K, gamma);
  for (int k = 1; k < K; ++k)
    if (!(nodes[k] > nodes[k - 1]))
      throw std::invalid_argument("TimeGrid: nodes not strictly increasing");
}

Trajectory::Trajectory(const TimeGrid& tg_, const HalfPlaneGrid& grid_)
    : tg(tg_), grid(grid_) {
  const int n = static_cast<int>(tg.nodes.size());
  omega.assign(n, ScalarField(grid));
  rho_tilde.assign(n, ScalarField(grid));
  rho.assign(n, ScalarField(grid));
  v.assign(n, VectorField(grid));
}

const ScalarField& Trajectory::field(TrajField label, int k) const {
  switch (label) {
    case TrajField::omega: return omega.at(k);
    case TrajField::rho_tilde: return rho_tilde.at(k);
    case TrajField::rho: return rho.at(k);
  }
  throw std::logic_error("Trajectory::field: bad label");
}

double xt_norm(const Trajectory& traj, TrajField label) {
  if (label == TrajField::rho)
    throw std::invalid_argument("xt_norm: rho is measured in the Z norm");
  double sup = 0.0;
  for (int k = 0; k < traj.size(); ++k) {
    const double t = traj.tg.node(k);
    sup = std::max(sup, std::pow(t, 0.25) *
                            lp_norm_omega(traj.field(label, k), 4.0 / 3.0));
  }
  return sup;
}

double zt_norm(const Trajectory& traj) {
  double sup = 0.0;
  for (int k = 0; k < traj.size(); ++k) {
    const double t = traj.tg.node(k);
    sup = std::max(sup, std::pow(t, 0.375) *
                            lp_norm_r3(traj.rho[k], 4.0 / 3.0));
  }
  return sup;
}

void save_norms_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write norms csv: " + path);
  const double inf = std::numeric_limits<double>::infinity();
  const double ps[] = {1.0, 4.0 / 3.0, 2.0, 4.0, inf};
  out << "t";
  for (const char* name : {"omega", "rho_tilde"})
    for (const char* p : {"L1", "L43", "L2", "L4", "Linf"})
      out << "," << name << "_" << p;
  for (const char* p : {"L1", "L43", "L2", "L4", "Linf"})
    out << ",rho_" << p;
  out << "\n";
  char buf[64];
  for (int k = 0; k < traj.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.15g", traj.tg.node(k));
    out << buf;
    for (TrajField label : {TrajField::omega, TrajField::rho_tilde}) {
      for (double p : ps) {
        std::snprintf(buf, sizeof(buf), ",%.15g",
                      lp_norm_omega(traj.field(label, k), p));
        out << buf;
      }
    }
    for (double p : ps) {
      std::snprintf(buf, sizeof(buf), ",%.15g", lp_norm_r3(traj.rho[k], p));
      out << buf;
    }
    out << "\n";
  }
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace axibouss
