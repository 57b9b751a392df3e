#pragma once

#include <string>
#include <vector>

#include "axibouss/diagnostics.hpp"
#include "axibouss/field.hpp"
#include "axibouss/time_grid.hpp"

namespace axibouss {

// Raised for malformed configs and unusable inputs (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SystemMode { boussinesq, nse, general_mu };
enum class SolverChoice { mild, stepper, chained };

struct ScenarioConfig {
  // [grid]
  int nr = 128, nz = 256;
  double r_max = 6.0, z_min = -6.0, z_max = 6.0;
  // [time]
  double T = 0.5;
  int K = 16;
  double gamma = 2.0;
  // [initial]
  std::string omega0 = "none";
  std::string rho0 = "none";
  std::string mu = "auto";
  // [run]
  SystemMode mode = SystemMode::boussinesq;
  SolverChoice solver = SolverChoice::mild;
  std::string output_dir = "out";
  std::vector<std::string> diagnostics = {"decay"};
  unsigned seed = 2026;
  bool dump_fields = false;
  // [mild]
  double tol = 1e-8;
  int max_sweeps = 50;
  // [stepper]
  double dt = 1e-3;
  bool auto_dt = true;
  double cfl_limit = 0.9;
  double smoothing_t0 = 0.02;
  double chain_t0 = 0.05;
  // [estimates]
  std::vector<std::string> kinds = {"smoothing", "weighted", "div", "biot"};
  int samples = 7;

  std::string base_dir;  // directory of the config file

  HalfPlaneGrid grid() const { return {r_max, z_min, z_max, nr, nz}; }
  TimeGrid time_grid() const { return {T, K, gamma}; }
};

// Strict key = value parser with [section] headers; unknown sections or keys
// are rejected.
ScenarioConfig parse_scenario_file(const std::string& path);
ScenarioConfig parse_scenario_text(const std::string& text,
                                   const std::string& base_dir);

struct GateResult {
  std::string id;       // which inequality or invariant the gate proxies
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct ScenarioOutcome {
  int exit_code = 0;  // 0 pass, 1 gate failure
  std::vector<GateResult> gates;
};

// Orchestrates measures -> solver -> diagnostics, writing norms.csv, gate
// reports, per-diagnostic CSVs and SVG plots into output_dir.  Nothing is
// written until the config and all referenced inputs have validated.
ScenarioOutcome run_scenario(const ScenarioConfig& cfg);

// Estimate sweeps driven by the same config ([grid] + [estimates]); writes
// one CSV and one SVG per kind and gates on exponent agreement (within 5%)
// and constant flatness (10% per decade).
ScenarioOutcome run_estimate_verification(const ScenarioConfig& cfg);

// Unvalidated least-squares slope of log(value) against log(time); used by
// trend gates over sub-decade windows (decay_fit stays strict).
double loglog_slope(const std::vector<double>& times,
                    const std::vector<double>& values);

}  // namespace axibouss
