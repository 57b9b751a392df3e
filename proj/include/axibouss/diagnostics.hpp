#pragma once

#include <string>
#include <vector>

#include "axibouss/measures.hpp"
#include "axibouss/time_grid.hpp"

namespace axibouss {

// --- sup-in-time functionals ---------------------------------------------

// N_p: sup over nodes <= T of t^{1-1/p} ||field(t)||_{L^p(Omega)}.
double np_functional(const Trajectory& traj, TrajField label, double p,
                     double T);
// J_p: sup over nodes <= T of t^{(3/2)(1-1/p)} ||rho(t)||_{L^p(R^3)}.
double jp_functional(const Trajectory& traj, double p, double T);

// M_p / F_p probe the semigroups on log-spaced times in [T/decades, T].
double mp_functional(const MeasureOmega& mu, double p, double T,
                     const HalfPlaneGrid& grid, int samples = 12,
                     double decades = 2.0);
double fp_functional(const Measure3DAxi& mu, double p, double T,
                     const HalfPlaneGrid& grid, int samples = 12,
                     double decades = 2.0);

// --- log-log decay fits ----------------------------------------------------

struct DecayFit {
  std::vector<double> times;
  std::vector<double> values;
  double slope = 0.0;
  double intercept = 0.0;  // of log(value) vs log(time)
  double r2 = 0.0;
};

// Least squares on (log t, log v); requires >= 5 positive samples spanning
// at least one decade.
DecayFit decay_fit(const std::vector<double>& times,
                   const std::vector<double>& values);

// --- semigroup estimate sweeps --------------------------------------------

enum class EstimateKind { smoothing, weighted, div, biot };

struct EstimateCase {
  std::string id;
  int semigroup = 1;  // 1 or 2
  double p = 1.0, q = 1.0;
  double alpha = 0.0, beta = 0.0;  // weights (weighted kind only)
};

struct EstimateRow {
  std::string case_id;
  double t = 0.0;
  double norm = 0.0;      // measured norm
  double constant = 0.0;  // norm / theoretical power = empirical C
};

struct EstimateCaseSummary {
  std::string id;
  double expected_power = 0.0;  // negated t-exponent of the estimate
  double fitted_power = 0.0;    // slope of the measured norm
  double constant_mid = 0.0;
  double drift_per_decade = 0.0;  // relative change of C per decade of t
  bool flat = false;              // |drift| <= 10% per decade
};

struct EstimateSweepResult {
  EstimateKind kind{};
  std::vector<EstimateRow> rows;
  std::vector<EstimateCaseSummary> summaries;
};

// Sweeps the estimate family over a decade-plus window of t.  Function-data
// cases use the half-plane dilation family matched to sqrt(t) (the exact
// scaling symmetry of both propagators), which is the regime where the
// estimates are saturated; measure cases use a snapped point atom.
EstimateSweepResult estimate_sweep(EstimateKind kind,
                                   const HalfPlaneGrid& grid,
                                   std::vector<EstimateCase> bank = {},
                                   int samples = 7, unsigned seed = 2026);

void save_sweep_csv(const EstimateSweepResult& res, const std::string& path);

std::vector<EstimateCase> default_estimate_bank(EstimateKind kind);

}  // namespace axibouss
