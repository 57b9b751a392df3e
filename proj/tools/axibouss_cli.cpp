#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "axibouss/bessel.hpp"
#include "axibouss/diagnostics.hpp"
#include "axibouss/elliptic.hpp"
#include "axibouss/measures.hpp"
#include "axibouss/scenario.hpp"
#include "axibouss/semigroups.hpp"

namespace {

using namespace axibouss;

int usage() {
  std::cerr <<
      "usage: axibouss <command> [args]\n"
      "  run <config>               solve a scenario and evaluate its gates\n"
      "  verify-estimates <config>  sweep the semigroup estimates\n"
      "  kernels-selfcheck          quick internal consistency of the kernels\n"
      "  decay-fit <csv>            log-log slope of a t,value table\n"
      "exit codes: 0 pass, 1 gate failure, 2 usage or config error\n";
  return 2;
}

void print_gates(const ScenarioOutcome& outcome) {
  for (const auto& g : outcome.gates) {
    std::printf("%s  %s  measured=%.6g threshold=%.6g%s%s\n",
                g.pass ? "PASS" : "FAIL", g.id.c_str(), g.measured,
                g.threshold, g.note.empty() ? "" : "  ", g.note.c_str());
  }
}

int cmd_run(const std::string& path) {
  const ScenarioConfig cfg = parse_scenario_file(path);
  const ScenarioOutcome outcome = run_scenario(cfg);
  print_gates(outcome);
  return outcome.exit_code;
}

int cmd_verify_estimates(const std::string& path) {
  const ScenarioConfig cfg = parse_scenario_file(path);
  const ScenarioOutcome outcome = run_estimate_verification(cfg);
  print_gates(outcome);
  return outcome.exit_code;
}

int cmd_kernels_selfcheck() {
  int failures = 0;
  auto check = [&](const char* name, double measured, double bound) {
    const bool ok = measured <= bound;
    std::printf("%s  %s  measured=%.3e bound=%.3e\n", ok ? "PASS" : "FAIL",
                name, measured, bound);
    if (!ok) ++failures;
  };

  // frozen high-precision reference values of the scaled Bessel pair
  check("scaled_i0(1)",
        std::abs(scaled_bessel_i0(1.0) / 0.4657596075936404365 - 1.0), 1e-12);
  check("scaled_i1(1)",
        std::abs(scaled_bessel_i1(1.0) / 0.2079104153497084489 - 1.0), 1e-12);
  check("scaled_i1(100)",
        std::abs(scaled_bessel_i1(100.0) / 0.03974415302513025267 - 1.0),
        1e-12);
  check("n1(0.5)",
        std::abs(n1_profile(0.5) / 0.5211541257058543721 - 1.0), 1e-12);
  check("n1(1e-6) -> 1", std::abs(n1_profile(1e-6) - 1.0), 1e-5);

  // unit mass recovered by the vorticity propagator at small time
  {
    const HalfPlaneGrid fine(6.0, -0.5, 0.5, 1536, 256);
    MeasureOmega delta;
    delta.add_atom(1.0, 1.0, 0.0);
    const double mass = lp_norm_omega(s1_apply(1e-4, delta, fine), 1.0);
    check("s1 delta mass at t=1e-4", std::abs(mass - 1.0), 0.01);
  }

  // heat-flow mass conservation on the 3D side
  {
    const HalfPlaneGrid g(6.0, -6.0, 6.0, 128, 256);
    Measure3DAxi ring;
    ring.add_circle_atom(1.0, 1.0, 0.0);
    const double mass = lp_norm_r3(s2_apply(0.02, ring, g), 1.0);
    check("s2 ring mass at t=0.02", std::abs(mass - 1.0), 1e-6);
  }

  // kernel solves its own PDE: discrete residual shrinks under refinement
  {
    MeasureOmega delta;
    delta.add_atom(1.0, 1.0, 0.0);
    auto residual = [&](int nr, int nz) {
      const HalfPlaneGrid g(4.0, -2.0, 2.0, nr, nz);
      const double t = 0.05, dt = 5e-5;
      const ScalarField f = s1_apply(t, delta, g);
      const ScalarField fp = s1_apply(t + dt, delta, g);
      const ScalarField fm = s1_apply(t - dt, delta, g);
      const Eigen::MatrixXd dfdt = (fp.values - fm.values) / (2.0 * dt);
      const Eigen::MatrixXd lap =
          apply_separable(radial_op_omega(g), g, f.values);
      return (dfdt - lap).norm() / lap.norm();
    };
    const double r1 = residual(128, 128);
    const double r2 = residual(256, 256);
    check("s1 kernel PDE residual ratio", r2 / r1, 1.0 / 1.8);
  }

  return failures == 0 ? 0 : 1;
}

int cmd_decay_fit(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    return 2;
  }
  std::vector<double> ts, vs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    double t, v;
    if (std::sscanf(line.c_str(), "%lf,%lf", &t, &v) == 2) {
      ts.push_back(t);
      vs.push_back(v);
    }
  }
  if (ts.empty()) {
    std::cerr << "no t,value rows found in " << path << "\n";
    return 2;
  }
  try {
    const DecayFit fit = decay_fit(ts, vs);
    std::printf("samples=%zu slope=%.6g intercept=%.6g r2=%.6g\n", ts.size(),
                fit.slope, fit.intercept, fit.r2);
  } catch (const std::exception& e) {
    std::cerr << "decay-fit: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) return usage();
  const std::string cmd = argv[1];
  try {
    if (cmd == "run") {
      if (argc != 3) return usage();
      return cmd_run(argv[2]);
    }
    if (cmd == "verify-estimates") {
      if (argc != 3) return usage();
      return cmd_verify_estimates(argv[2]);
    }
    if (cmd == "kernels-selfcheck") {
      if (argc != 2) return usage();
      return cmd_kernels_selfcheck();
    }
    if (cmd == "decay-fit") {
      if (argc != 3) return usage();
      return cmd_decay_fit(argv[2]);
    }
  } catch (const axibouss::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return usage();
}
