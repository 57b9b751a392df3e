#pragma once

#include <string>
#include <vector>

#include "axibouss/field.hpp"

namespace axibouss {

// Stretched time nodes t_k = T (k/K)^gamma, k = 1..K.  gamma = 2 resolves the
// t^{-1/4} blow-up of the weighted norms near t = 0.
struct TimeGrid {
  double T = 0.0;
  int K = 0;
  double gamma = 2.0;
  std::vector<double> nodes;  // nodes[k] = t_{k+1}, strictly increasing

  TimeGrid() = default;
  TimeGrid(double T_, int K_, double gamma_ = 2.0);

  double node(int k) const { return nodes.at(k); }
  // Left endpoint of subinterval k: 0 for k = 0, else nodes[k-1].
  double lower(int k) const { return k == 0 ? 0.0 : nodes.at(k - 1); }
};

enum class TrajField { omega, rho_tilde, rho };

// Time-indexed solution triple with the associated velocity.
struct Trajectory {
  TimeGrid tg;
  HalfPlaneGrid grid;
  std::vector<ScalarField> omega;
  std::vector<ScalarField> rho_tilde;
  std::vector<ScalarField> rho;
  std::vector<VectorField> v;

  Trajectory() = default;
  Trajectory(const TimeGrid& tg_, const HalfPlaneGrid& grid_);

  int size() const { return static_cast<int>(tg.nodes.size()); }
  const ScalarField& field(TrajField label, int k) const;
};

// sup_k t_k^{1/4} ||f(t_k)||_{L^{4/3}(Omega)} for omega or rho_tilde.
double xt_norm(const Trajectory& traj, TrajField label);
// sup_k t_k^{3/8} ||rho(t_k)||_{L^{4/3}(R^3)}.
double zt_norm(const Trajectory& traj);

// t, then L1, L4/3, L2, L4, Linf per unknown (Omega norms for omega and
// rho_tilde, R^3 norms for rho), 15 significant digits.
void save_norms_csv(const Trajectory& traj, const std::string& path);

}  // namespace axibouss
