#include "axibouss/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "axibouss/biot_savart.hpp"
#include "axibouss/mild_solver.hpp"
#include "axibouss/semigroups.hpp"
#include "axibouss/stepper.hpp"
#include "axibouss/svg_plot.hpp"

namespace axibouss {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_num(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + key + ": '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  const double x = parse_num(key, v);
  if (x != std::floor(x)) throw ConfigError("expected integer for " + key);
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("expected boolean for " + key + ": '" + v + "'");
}

}  // namespace

ScenarioConfig parse_scenario_text(const std::string& text,
                                   const std::string& base_dir) {
  ScenarioConfig cfg;
  cfg.base_dir = base_dir;
  std::istringstream in(text);
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
        throw ConfigError("malformed section header at line " +
                          std::to_string(lineno));
      section = line.substr(1, line.size() - 2);
      if (section != "grid" && section != "time" && section != "initial" &&
          section != "run" && section != "mild" && section != "stepper" &&
          section != "estimates")
        throw ConfigError("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " +
                        std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("key '" + key + "' before any section");

    auto unknown = [&]() -> ConfigError {
      return ConfigError("unknown key '" + key + "' in section [" + section +
                         "]");
    };
    if (section == "grid") {
      if (key == "nr") cfg.nr = parse_int(key, value);
      else if (key == "nz") cfg.nz = parse_int(key, value);
      else if (key == "r_max") cfg.r_max = parse_num(key, value);
      else if (key == "z_min") cfg.z_min = parse_num(key, value);
      else if (key == "z_max") cfg.z_max = parse_num(key, value);
      else throw unknown();
    } else if (section == "time") {
      if (key == "T") cfg.T = parse_num(key, value);
      else if (key == "K") cfg.K = parse_int(key, value);
      else if (key == "gamma") cfg.gamma = parse_num(key, value);
      else throw unknown();
    } else if (section == "initial") {
      if (key == "omega0") cfg.omega0 = value;
      else if (key == "rho0") cfg.rho0 = value;
      else if (key == "mu") cfg.mu = value;
      else throw unknown();
    } else if (section == "run") {
      if (key == "mode") {
        if (value == "boussinesq") cfg.mode = SystemMode::boussinesq;
        else if (value == "nse") cfg.mode = SystemMode::nse;
        else if (value == "general-mu") cfg.mode = SystemMode::general_mu;
        else throw ConfigError("unknown mode '" + value + "'");
      } else if (key == "solver") {
        if (value == "mild") cfg.solver = SolverChoice::mild;
        else if (value == "stepper") cfg.solver = SolverChoice::stepper;
        else if (value == "chained") cfg.solver = SolverChoice::chained;
        else throw ConfigError("unknown solver '" + value + "'");
      } else if (key == "output_dir") cfg.output_dir = value;
      else if (key == "diagnostics") cfg.diagnostics = split_list(value);
      else if (key == "seed") cfg.seed = static_cast<unsigned>(parse_int(key, value));
      else if (key == "dump_fields") cfg.dump_fields = parse_bool(key, value);
      else throw unknown();
    } else if (section == "mild") {
      if (key == "tol") cfg.tol = parse_num(key, value);
      else if (key == "max_sweeps") cfg.max_sweeps = parse_int(key, value);
      else throw unknown();
    } else if (section == "stepper") {
      if (key == "dt") cfg.dt = parse_num(key, value);
      else if (key == "auto_dt") cfg.auto_dt = parse_bool(key, value);
      else if (key == "cfl_limit") cfg.cfl_limit = parse_num(key, value);
      else if (key == "smoothing_t0") cfg.smoothing_t0 = parse_num(key, value);
      else if (key == "chain_t0") cfg.chain_t0 = parse_num(key, value);
      else throw unknown();
    } else if (section == "estimates") {
      if (key == "kinds") cfg.kinds = split_list(value);
      else if (key == "samples") cfg.samples = parse_int(key, value);
      else throw unknown();
    }
  }
  for (const auto& d : cfg.diagnostics)
    if (d != "decay" && d != "contraction" && d != "coupling" &&
        d != "weak_convergence" && d != "maxprinciple" && d != "norms")
      throw ConfigError("unknown diagnostic '" + d + "'");
  for (const auto& k : cfg.kinds)
    if (k != "smoothing" && k != "weighted" && k != "div" && k != "biot")
      throw ConfigError("unknown estimate kind '" + k + "'");
  return cfg;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(
      buf.str(), std::filesystem::path(path).parent_path().string());
}

double loglog_slope(const std::vector<double>& times,
                    const std::vector<double>& values) {
  const int n = static_cast<int>(times.size());
  if (n < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(times[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double vx = sxx - sx * sx / n;
  return vx > 0.0 ? (sxy - sx * sy / n) / vx : 0.0;
}

namespace {

struct LoadedData {
  MeasureOmega omega0;
  Measure3DAxi rho0;
  MeasureOmega mu;
};

std::string resolve(const ScenarioConfig& cfg, const std::string& p) {
  std::filesystem::path q(p);
  if (q.is_absolute() || cfg.base_dir.empty()) return p;
  return (std::filesystem::path(cfg.base_dir) / q).string();
}

LoadedData load_inputs(const ScenarioConfig& cfg, const HalfPlaneGrid& grid) {
  LoadedData d;
  auto need_file = [&](const std::string& p) {
    const std::string full = resolve(cfg, p);
    if (!std::filesystem::exists(full))
      throw ConfigError("referenced file does not exist: " + full);
    return full;
  };
  if (cfg.omega0 != "none")
    d.omega0 = measure_omega_from_file(need_file(cfg.omega0), grid);
  if (cfg.mode != SystemMode::nse && cfg.rho0 != "none")
    d.rho0 = measure_3d_from_file(need_file(cfg.rho0), grid);
  switch (cfg.mode) {
    case SystemMode::nse:
      if (cfg.mu != "auto" && cfg.mu != "none")
        throw ConfigError("nse mode does not take a mu file");
      break;
    case SystemMode::boussinesq:
      if (cfg.mu != "auto")
        throw ConfigError("boussinesq mode requires mu = auto");
      d.mu = boussinesq_mu(d.rho0);
      break;
    case SystemMode::general_mu:
      if (cfg.mu == "auto")
        d.mu = boussinesq_mu(d.rho0);
      else if (cfg.mu != "none")
        d.mu = measure_omega_from_file(need_file(cfg.mu), grid);
      break;
  }
  return d;
}

struct SolvedRun {
  // one row per retained output time
  std::vector<double> times;
  std::vector<ScalarField> omega, rho_tilde, rho;
  // mild-solver extras
  bool has_report = false;
  ContractionReport report;
  // per-step extrema along stepper runs (time, max_pi, max_gamma)
  std::vector<std::array<double, 3>> step_extrema;
};

ScalarField rho_tilde_of(const ScalarField& rho) {
  ScalarField out(rho.grid);
  for (int i = 0; i < rho.grid.nz; ++i)
    for (int j = 0; j < rho.grid.nr; ++j)
      out.values(j, i) = rho.grid.r(j) * rho.values(j, i);
  return out;
}

SolvedRun run_mild(const ScenarioConfig& cfg, const LoadedData& data,
                   const HalfPlaneGrid& grid, const TimeGrid& tg) {
  PicardOptions opts;
  opts.tol = cfg.tol;
  opts.max_sweeps = cfg.max_sweeps;
  auto [traj, rep] = picard_solve(data.omega0, data.mu, data.rho0, tg, grid, opts);
  SolvedRun run;
  run.has_report = true;
  run.report = rep;
  for (int k = 0; k < traj.size(); ++k) {
    run.times.push_back(tg.node(k));
    run.omega.push_back(traj.omega[k]);
    run.rho_tilde.push_back(traj.rho_tilde[k]);
    run.rho.push_back(traj.rho[k]);
  }
  return run;
}

// Steps from (t0, smooth fields) to T, keeping snapshots at the requested
// absolute times and recording per-step extrema for the max principles.
SolvedRun run_stepper_from(const ScenarioConfig& cfg, const HalfPlaneGrid& grid,
                           double t0, const ScalarField& omega_start,
                           const ScalarField& rho_start,
                           const std::vector<double>& abs_times) {
  StepperOptions opt;
  opt.dt = cfg.dt;
  opt.auto_dt = cfg.auto_dt;
  opt.cfl_limit = cfg.cfl_limit;
  opt.boussinesq = cfg.mode != SystemMode::nse;
  ReferenceStepper stepper(grid, opt);
  StepperState s = stepper.make_state(omega_start, rho_start);

  SolvedRun run;
  {
    const DerivedFields d0 = derived_fields(s);
    run.step_extrema.push_back(
        {t0, d0.pi.values.maxCoeff(), d0.gamma.values.maxCoeff()});
  }
  for (double target : abs_times) {
    if (target < t0 - 1e-12) continue;
    while (s.time + t0 < target - 1e-12 * std::max(target, 1.0)) {
      s = stepper.step(s, target - (s.time + t0));
      run.step_extrema.push_back({s.time + t0, s.max_pi, s.max_gamma});
    }
    run.times.push_back(target);
    run.omega.push_back(s.omega);
    run.rho_tilde.push_back(rho_tilde_of(s.rho));
    run.rho.push_back(s.rho);
  }
  return run;
}

SolvedRun run_stepper(const ScenarioConfig& cfg, const LoadedData& data,
                      const HalfPlaneGrid& grid, const TimeGrid& tg) {
  if (!(cfg.smoothing_t0 > 0.0))
    throw ConfigError("stepper runs need smoothing_t0 > 0");
  const double t0 = cfg.smoothing_t0;
  const ScalarField omega_start = s1_apply(t0, data.omega0, grid);
  ScalarField rho_start(grid);
  if (cfg.mode != SystemMode::nse) rho_start = s2_apply(t0, data.rho0, grid);
  std::vector<double> abs_times;
  for (double t : tg.nodes)
    if (t > t0 + 1e-12) abs_times.push_back(t);
  if (abs_times.empty() || abs_times.back() < tg.T)
    abs_times.push_back(tg.T);
  return run_stepper_from(cfg, grid, t0, omega_start, rho_start, abs_times);
}

SolvedRun run_chained(const ScenarioConfig& cfg, const LoadedData& data,
                      const HalfPlaneGrid& grid, const TimeGrid& tg) {
  if (!(cfg.chain_t0 > 0.0 && cfg.chain_t0 < tg.T))
    throw ConfigError("chained runs need 0 < chain_t0 < T");
  const TimeGrid head(cfg.chain_t0, std::max(6, cfg.K / 2), cfg.gamma);
  PicardOptions opts;
  opts.tol = cfg.tol;
  opts.max_sweeps = cfg.max_sweeps;
  auto [traj, rep] = picard_solve(data.omega0, data.mu, data.rho0, head, grid, opts);
  const int last = traj.size() - 1;
  std::vector<double> abs_times;
  for (double t : tg.nodes)
    if (t > cfg.chain_t0 + 1e-12) abs_times.push_back(t);
  if (abs_times.empty() || abs_times.back() < tg.T) abs_times.push_back(tg.T);
  SolvedRun run = run_stepper_from(cfg, grid, cfg.chain_t0, traj.omega[last],
                                   traj.rho[last], abs_times);
  run.has_report = true;
  run.report = rep;
  return run;
}

void write_norms_csv(const SolvedRun& run, const std::string& path) {
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
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.15g", run.times[k]);
    out << buf;
    for (const auto* fields : {&run.omega, &run.rho_tilde}) {
      for (double p : ps) {
        std::snprintf(buf, sizeof(buf), ",%.15g",
                      lp_norm_omega((*fields)[k], p));
        out << buf;
      }
    }
    for (double p : ps) {
      std::snprintf(buf, sizeof(buf), ",%.15g", lp_norm_r3(run.rho[k], p));
      out << buf;
    }
    out << "\n";
  }
}

void gate_decay(const ScenarioConfig& cfg, const SolvedRun& run,
                std::vector<GateResult>& gates, const std::string& out_dir) {
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<std::pair<std::string, double>> ps = {
      {"p43", 4.0 / 3.0}, {"p2", 2.0}, {"p4", 4.0}, {"pinf", inf}};
  struct Unknown {
    std::string name;
    const std::vector<ScalarField>* fields;
    bool r3;
    double weight_exp_factor;  // 1 for Omega-side, 3/2 for rho
  };
  const std::vector<Unknown> unknowns = {
      {"omega", &run.omega, false, 1.0},
      {"rho_tilde", &run.rho_tilde, false, 1.0},
      {"rho", &run.rho, true, 1.5}};

  std::vector<PlotSeries> series;
  std::vector<double> slopes;
  for (const auto& u : unknowns) {
    for (const auto& [pname, p] : ps) {
      std::vector<double> ts, raw, weighted;
      for (std::size_t k = 0; k < run.times.size(); ++k) {
        const double t = run.times[k];
        const double norm = u.r3 ? lp_norm_r3((*u.fields)[k], p)
                                 : lp_norm_omega((*u.fields)[k], p);
        if (!(norm > 0.0)) continue;
        ts.push_back(t);
        raw.push_back(norm);
        weighted.push_back(std::pow(t, u.weight_exp_factor * (1.0 - 1.0 / p)) *
                           norm);
      }
      if (ts.size() < 5) continue;  // unknown absent from this scenario
      // skip the first two nodes: initial-layer pollution
      const std::vector<double> ts_fit(ts.begin() + 2, ts.end());
      const std::vector<double> raw_fit(raw.begin() + 2, raw.end());
      series.push_back({u.name + "_" + pname, ts_fit, raw_fit});
      slopes.push_back(loglog_slope(ts_fit, raw_fit));

      // bound gate: no upward trend of the weighted quantity over the last
      // decade of t
      std::vector<double> tl, wl;
      for (std::size_t k = 0; k < ts.size(); ++k)
        if (ts[k] >= 0.1 * run.times.back()) {
          tl.push_back(ts[k]);
          wl.push_back(weighted[k]);
        }
      GateResult g;
      g.id = "decay-bound " + u.name + " " + pname +
             " (weighted sup-norm trend)";
      g.threshold = 0.10;
      g.measured = loglog_slope(tl, wl);
      g.pass = g.measured <= g.threshold;
      gates.push_back(g);
    }
  }
  if (!series.empty()) {
    std::vector<PlotSeries> with_x = series;
    write_loglog_svg(out_dir + "/decay_norms.svg",
                     "norm decay (first two nodes dropped)", "t", "norm",
                     with_x, slopes);
    std::ofstream csv(out_dir + "/decay_fits.csv");
    csv << "# first two time nodes dropped (initial-layer pollution)\n";
    csv << "series,slope\n";
    for (std::size_t i = 0; i < series.size(); ++i)
      csv << series[i].name << "," << slopes[i] << "\n";
  }
  (void)cfg;
}

void gate_coupling(const SolvedRun& run, std::vector<GateResult>& gates) {
  GateResult g;
  g.id = "coupling rho_tilde = r rho (relative L1 gap)";
  g.threshold = 0.05;
  double worst = 0.0;
  bool any = false;
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    const double denom = lp_norm_omega(run.rho_tilde[k], 1.0);
    if (denom <= 0.0) continue;
    any = true;
    ScalarField diff(run.rho_tilde[k].grid);
    diff.values = run.rho_tilde[k].values - rho_tilde_of(run.rho[k]).values;
    worst = std::max(worst, lp_norm_omega(diff, 1.0) / denom);
  }
  g.measured = worst;
  g.pass = !any || worst <= g.threshold;
  g.note = any ? "" : "no density present; gate skipped";
  gates.push_back(g);
}

void gate_contraction(const SolvedRun& run, std::vector<GateResult>& gates,
                      const std::string& out_dir) {
  GateResult g;
  g.id = "picard contraction (geometric increment decay)";
  g.threshold = 1.0;
  g.measured = run.report.ratios.empty() ? 0.0 : run.report.ratios.back();
  g.pass = run.report.converged && run.report.satisfied;
  gates.push_back(g);
  std::ofstream csv(out_dir + "/contraction.csv");
  csv << "sweep,increment,ratio\n";
  for (std::size_t i = 0; i < run.report.increments.size(); ++i) {
    csv << (i + 1) << "," << run.report.increments[i] << ",";
    if (i >= 1) csv << run.report.ratios[i - 1];
    csv << "\n";
  }
  csv << "# a0t," << run.report.a0t << "\n# at," << run.report.at << "\n";
}

void gate_maxprinciple(const ScenarioConfig& cfg, const SolvedRun& run,
                       std::vector<GateResult>& gates) {
  const bool nse = cfg.mode == SystemMode::nse;
  GateResult g;
  g.id = nse ? "max-principle Pi (vorticity-over-r sup bound)"
             : "max-principle Gamma (buoyancy-coupled sup bound)";
  if (run.step_extrema.size() < 2) {
    g.pass = false;
    g.note = "no stepper trace";
    gates.push_back(g);
    return;
  }
  const int column = nse ? 1 : 2;
  const double range0 = std::abs(run.step_extrema.front()[column]);
  g.threshold = 1e-12 * std::max(range0, 1.0);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < run.step_extrema.size(); ++k)
    worst = std::max(worst, run.step_extrema[k][column] -
                                run.step_extrema[k - 1][column]);
  g.measured = worst;
  g.pass = worst <= g.threshold;
  gates.push_back(g);
}

void gate_weak_convergence(const LoadedData& data, const SolvedRun& run,
                           std::vector<GateResult>& gates,
                           const std::string& out_dir) {
  if (run.times.size() < 3) return;
  // rebuild a trajectory view of the three earliest outputs
  Trajectory probe;
  probe.grid = run.omega.front().grid;
  probe.tg.T = run.times[2];
  probe.tg.K = 3;
  probe.tg.gamma = 1.0;
  probe.tg.nodes = {run.times[0], run.times[1], run.times[2]};
  for (int k = 0; k < 3; ++k) {
    probe.omega.push_back(run.omega[k]);
    probe.rho_tilde.push_back(run.rho_tilde[k]);
    probe.rho.push_back(run.rho[k]);
    probe.v.push_back(VectorField(probe.grid));
  }
  std::vector<TestFnOmega> bank = {
      [](double r, double z) {
        return r * r * std::exp(-0.5 * (r * r + z * z));
      },
      [](double r, double z) {
        return r * r * z * std::exp(-0.5 * (r * r + z * z));
      },
      [](double r, double z) {
        return r * r * r * std::exp(-0.5 * (r * r + z * z));
      }};
  const WeakConvergenceReport rep =
      weak_convergence_probe(probe, data.omega0, data.mu, data.rho0, bank);

  std::ofstream csv(out_dir + "/weak_convergence.csv");
  csv << "test,t,gap_omega,gap_rho_tilde,gap_rho\n";
  for (const auto& row : rep.rows)
    csv << row.test_index << "," << row.t << "," << row.gap_omega << ","
        << row.gap_rho_tilde << "," << row.gap_rho << "\n";

  GateResult g;
  g.id = "weak convergence to the data (pairing gaps decrease)";
  g.threshold = 1.0;
  g.measured = 0.0;
  g.pass = true;
  const bool have_rho = tv_norm(data.rho0) > 0.0;
  for (std::size_t b = 0; b < bank.size(); ++b) {
    const auto* r0 = &rep.rows[3 * b];  // ascending t: rows 0,1,2
    auto check = [&](double g0, double g1, double g2) {
      // gaps must not grow as t decreases
      const double eps = 1e-14;
      if (g0 > g1 + eps || g1 > g2 + eps) {
        g.pass = false;
        g.measured = std::max({g.measured, g0 / std::max(g1, 1e-300),
                               g1 / std::max(g2, 1e-300)});
      }
    };
    check(r0[0].gap_omega, r0[1].gap_omega, r0[2].gap_omega);
    if (have_rho) {
      check(r0[0].gap_rho_tilde, r0[1].gap_rho_tilde, r0[2].gap_rho_tilde);
      check(r0[0].gap_rho, r0[1].gap_rho, r0[2].gap_rho);
    }
  }
  gates.push_back(g);
}

void write_gates(const std::vector<GateResult>& gates,
                 const std::string& path) {
  std::ofstream out(path);
  for (const auto& g : gates) {
    out << (g.pass ? "PASS" : "FAIL") << " " << g.id
        << " measured=" << g.measured << " threshold=" << g.threshold;
    if (!g.note.empty()) out << " (" << g.note << ")";
    out << "\n";
  }
}

}  // namespace

ScenarioOutcome run_scenario(const ScenarioConfig& cfg) {
  const HalfPlaneGrid grid = cfg.grid();
  const TimeGrid tg = cfg.time_grid();
  const LoadedData data = load_inputs(cfg, grid);
  if (cfg.solver != SolverChoice::mild &&
      std::find(cfg.diagnostics.begin(), cfg.diagnostics.end(),
                "contraction") != cfg.diagnostics.end() &&
      cfg.solver == SolverChoice::stepper)
    throw ConfigError("contraction diagnostic needs a mild or chained solve");
  if (std::find(cfg.diagnostics.begin(), cfg.diagnostics.end(),
                "maxprinciple") != cfg.diagnostics.end() &&
      cfg.solver == SolverChoice::mild)
    throw ConfigError("maxprinciple diagnostic needs a stepper solve");

  // inputs validated; only now touch the filesystem
  const std::string out_dir = resolve(cfg, cfg.output_dir);
  std::filesystem::create_directories(out_dir);

  SolvedRun run;
  switch (cfg.solver) {
    case SolverChoice::mild: run = run_mild(cfg, data, grid, tg); break;
    case SolverChoice::stepper: run = run_stepper(cfg, data, grid, tg); break;
    case SolverChoice::chained: run = run_chained(cfg, data, grid, tg); break;
  }

  write_norms_csv(run, out_dir + "/norms.csv");
  if (cfg.dump_fields) {
    for (std::size_t k = 0; k < run.times.size(); ++k) {
      char name[64];
      std::snprintf(name, sizeof(name), "/fields_%03zu", k);
      save_field_csv(run.omega[k], out_dir + name + "_omega.csv");
      save_field_csv(run.rho_tilde[k], out_dir + name + "_rho_tilde.csv");
      save_field_csv(run.rho[k], out_dir + name + "_rho.csv");
    }
  }
  {
    std::ofstream meta(out_dir + "/run_meta.txt");
    meta << "seed=" << cfg.seed << "\nsolver="
         << (cfg.solver == SolverChoice::mild
                 ? "mild"
                 : cfg.solver == SolverChoice::stepper ? "stepper" : "chained")
         << "\n";
    if (run.has_report)
      meta << "picard_sweeps=" << run.report.sweeps
           << "\npicard_converged=" << run.report.converged
           << "\npicard_diverged=" << run.report.diverged << "\n";
  }

  ScenarioOutcome outcome;
  if (run.has_report && run.report.diverged) {
    GateResult g;
    g.id = "picard contraction (smallness condition at this resolution)";
    g.pass = false;
    g.note = "iteration diverged";
    outcome.gates.push_back(g);
  }
  for (const auto& d : cfg.diagnostics) {
    if (d == "decay") gate_decay(cfg, run, outcome.gates, out_dir);
    else if (d == "coupling") gate_coupling(run, outcome.gates);
    else if (d == "contraction" && run.has_report)
      gate_contraction(run, outcome.gates, out_dir);
    else if (d == "maxprinciple") gate_maxprinciple(cfg, run, outcome.gates);
    else if (d == "weak_convergence")
      gate_weak_convergence(data, run, outcome.gates, out_dir);
  }
  write_gates(outcome.gates, out_dir + "/gates.txt");
  for (const auto& g : outcome.gates)
    if (!g.pass) outcome.exit_code = 1;
  return outcome;
}

ScenarioOutcome run_estimate_verification(const ScenarioConfig& cfg) {
  const HalfPlaneGrid grid = cfg.grid();
  const std::string out_dir = resolve(cfg, cfg.output_dir);
  std::filesystem::create_directories(out_dir);
  ScenarioOutcome outcome;
  for (const auto& kind_name : cfg.kinds) {
    EstimateKind kind = EstimateKind::smoothing;
    if (kind_name == "weighted") kind = EstimateKind::weighted;
    else if (kind_name == "div") kind = EstimateKind::div;
    else if (kind_name == "biot") kind = EstimateKind::biot;
    const EstimateSweepResult res =
        estimate_sweep(kind, grid, {}, cfg.samples, cfg.seed);
    save_sweep_csv(res, out_dir + "/estimates_" + kind_name + ".csv");

    std::vector<PlotSeries> series;
    for (const auto& s : res.summaries) {
      PlotSeries ps;
      ps.name = s.id;
      for (const auto& row : res.rows)
        if (row.case_id == s.id && row.constant > 0.0) {
          ps.x.push_back(row.t);
          ps.y.push_back(row.constant);
        }
      if (!ps.x.empty()) series.push_back(ps);
    }
    if (!series.empty())
      write_loglog_svg(out_dir + "/estimates_" + kind_name + ".svg",
                       "empirical constants: " + kind_name, "t",
                       "measured / power", series);

    for (const auto& s : res.summaries) {
      if (kind == EstimateKind::biot) {
        GateResult g;
        g.id = "velocity-recovery constant bounded (" + s.id + ")";
        g.threshold = 2.0;
        double mx = 0.0;
        for (const auto& row : res.rows) mx = std::max(mx, row.constant);
        g.measured = mx / s.constant_mid;
        g.pass = g.measured <= g.threshold;
        outcome.gates.push_back(g);
        continue;
      }
      GateResult g;
      g.id = "estimate exponent " + kind_name + " " + s.id;
      g.threshold = std::max(0.05 * std::abs(s.expected_power), 0.025);
      g.measured = std::abs(s.fitted_power - s.expected_power);
      g.pass = g.measured <= g.threshold;
      outcome.gates.push_back(g);
      GateResult f;
      f.id = "estimate constant flat " + kind_name + " " + s.id;
      f.threshold = 0.10;
      f.measured = std::abs(s.drift_per_decade);
      f.pass = s.flat;
      outcome.gates.push_back(f);
    }
  }
  write_gates(outcome.gates, out_dir + "/gates.txt");
  for (const auto& g : outcome.gates)
    if (!g.pass) outcome.exit_code = 1;
  return outcome;
}

}  // namespace axibouss
