#include "axibouss/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

#include "axibouss/biot_savart.hpp"
#include "axibouss/semigroups.hpp"

namespace axibouss {

namespace {

double time_weight_omega(double t, double p) {
  return std::pow(t, 1.0 - 1.0 / p);
}
double time_weight_r3(double t, double p) {
  return std::pow(t, 1.5 * (1.0 - 1.0 / p));
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return out;
}

}  // namespace

double np_functional(const Trajectory& traj, TrajField label, double p,
                     double T) {
  if (!(p >= 1.0)) throw std::invalid_argument("np_functional: p >= 1");
  if (T > traj.tg.T * (1.0 + 1e-12))
    throw std::invalid_argument("np_functional: T beyond the trajectory");
  double sup = 0.0;
  for (int k = 0; k < traj.size(); ++k) {
    const double t = traj.tg.node(k);
    if (t > T) break;
    sup = std::max(sup, time_weight_omega(t, p) *
                            lp_norm_omega(traj.field(label, k), p));
  }
  return sup;
}

double jp_functional(const Trajectory& traj, double p, double T) {
  if (!(p >= 1.0)) throw std::invalid_argument("jp_functional: p >= 1");
  if (T > traj.tg.T * (1.0 + 1e-12))
    throw std::invalid_argument("jp_functional: T beyond the trajectory");
  double sup = 0.0;
  for (int k = 0; k < traj.size(); ++k) {
    const double t = traj.tg.node(k);
    if (t > T) break;
    sup = std::max(sup, time_weight_r3(t, p) * lp_norm_r3(traj.rho[k], p));
  }
  return sup;
}

double mp_functional(const MeasureOmega& mu, double p, double T,
                     const HalfPlaneGrid& grid, int samples, double decades) {
  if (!(p >= 1.0)) throw std::invalid_argument("mp_functional: p >= 1");
  double sup = 0.0;
  for (double t : log_spaced(T * std::pow(10.0, -decades), T, samples))
    sup = std::max(sup, time_weight_omega(t, p) *
                            lp_norm_omega(s1_apply(t, mu, grid), p));
  return sup;
}

double fp_functional(const Measure3DAxi& mu, double p, double T,
                     const HalfPlaneGrid& grid, int samples, double decades) {
  if (!(p >= 1.0)) throw std::invalid_argument("fp_functional: p >= 1");
  double sup = 0.0;
  for (double t : log_spaced(T * std::pow(10.0, -decades), T, samples))
    sup = std::max(sup, time_weight_r3(t, p) *
                            lp_norm_r3(s2_apply(t, mu, grid), p));
  return sup;
}

DecayFit decay_fit(const std::vector<double>& times,
                   const std::vector<double>& values) {
  if (times.size() != values.size())
    throw std::invalid_argument("decay_fit: size mismatch");
  if (times.size() < 5)
    throw std::invalid_argument("decay_fit: need at least 5 samples");
  double tmin = times[0], tmax = times[0];
  for (double t : times) {
    if (!(t > 0.0)) throw std::invalid_argument("decay_fit: times must be > 0");
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
  }
  if (tmax < 10.0 * tmin)
    throw std::invalid_argument("decay_fit: samples must span a decade");
  for (double v : values)
    if (!(v > 0.0))
      throw std::invalid_argument("decay_fit: values must be positive");

  const int n = static_cast<int>(times.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(times[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  DecayFit fit;
  fit.times = times;
  fit.values = values;
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  fit.slope = cxy / vx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r2 = (vy > 0.0) ? (cxy * cxy) / (vx * vy) : 1.0;
  return fit;
}

namespace {

struct DilationFamily {
  // base ring shapes; the case evaluates them dilated by lambda = sqrt(t/c)
  static constexpr double ring_radius = 1.0;
  static constexpr double ring_width = 0.16;
  static constexpr double c = 0.0625;  // t = c * lambda^2

  static double base(double r, double z) {
    const double dr = r - ring_radius;
    return std::exp(-(dr * dr + z * z) / (2.0 * ring_width * ring_width));
  }
  static double base_z(double r, double z) {
    const double dr = r - ring_radius;
    const double dz = z - 0.3;
    return 0.5 * std::exp(-(dr * dr + dz * dz) / (2.0 * ring_width * ring_width));
  }

  static ScalarField sample_scaled(const HalfPlaneGrid& g, double lambda,
                                   double (*shape)(double, double)) {
    return ScalarField::sample(g, [lambda, shape](double r, double z) {
      return shape(r / lambda, z / lambda);
    });
  }
};

ScalarField vector_magnitude(const ScalarField& fr, const ScalarField& fz) {
  ScalarField m(fr.grid);
  m.values = (fr.values.array().square() + fz.values.array().square()).sqrt();
  return m;
}

EstimateCaseSummary summarize(const std::string& id, double expected_power,
                              const std::vector<double>& ts,
                              const std::vector<double>& ratios) {
  EstimateCaseSummary s;
  s.id = id;
  s.expected_power = expected_power;
  const DecayFit norm_fit = decay_fit(ts, ratios);
  s.fitted_power = -norm_fit.slope;
  std::vector<double> constants(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i)
    constants[i] = ratios[i] * std::pow(ts[i], expected_power);
  s.constant_mid = constants[constants.size() / 2];
  const DecayFit c_fit = decay_fit(ts, constants);
  s.drift_per_decade = std::pow(10.0, c_fit.slope) - 1.0;
  s.flat = std::abs(s.drift_per_decade) <= 0.10;
  return s;
}

}  // namespace

std::vector<EstimateCase> default_estimate_bank(EstimateKind kind) {
  std::vector<EstimateCase> bank;
  switch (kind) {
    case EstimateKind::smoothing:
      bank = {{"s1_p1_q1", 1, 1.0, 1.0, 0, 0},
              {"s1_p1_q43", 1, 1.0, 4.0 / 3.0, 0, 0},
              {"s1_p43_q2", 1, 4.0 / 3.0, 2.0, 0, 0},
              {"s1_p1_q2", 1, 1.0, 2.0, 0, 0},
              {"s1_p1_q4", 1, 1.0, 4.0, 0, 0},
              {"s2_p1_q2", 2, 1.0, 2.0, 0, 0}};
      break;
    case EstimateKind::weighted:
      bank = {{"s1_a0_b1_p1_q43", 1, 1.0, 4.0 / 3.0, 0.0, 1.0},
              {"s1_am1_b0_p43_q2", 1, 4.0 / 3.0, 2.0, -1.0, 0.0},
              {"s1_a1_b2_p1_q2", 1, 1.0, 2.0, 1.0, 2.0},
              {"s2_a0_b1_p1_q43", 2, 1.0, 4.0 / 3.0, 0.0, 1.0}};
      break;
    case EstimateKind::div:
      bank = {{"s1_div_p43_q43", 1, 4.0 / 3.0, 4.0 / 3.0, 0, 0},
              {"s1_div_p1_q2", 1, 1.0, 2.0, 0, 0},
              {"s2_div_p43_q43", 2, 4.0 / 3.0, 4.0 / 3.0, 0, 0}};
      break;
    case EstimateKind::biot:
      for (int i = 0; i < 20; ++i)
        bank.push_back({"biot_case_" + std::to_string(i), 1, 4.0 / 3.0, 4.0,
                        0, 0});
      break;
  }
  return bank;
}

EstimateSweepResult estimate_sweep(EstimateKind kind,
                                   const HalfPlaneGrid& grid,
                                   std::vector<EstimateCase> bank, int samples,
                                   unsigned seed) {
  if (bank.empty()) bank = default_estimate_bank(kind);
  if (bank.empty()) throw std::invalid_argument("estimate_sweep: empty bank");
  EstimateSweepResult res;
  res.kind = kind;

  if (kind == EstimateKind::biot) {
    // rings shrinking toward the axis, randomized weights and offsets
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> amp(0.5, 2.0), off(-0.4, 0.4);
    std::vector<double> radii, ratios;
    for (std::size_t i = 0; i < bank.size(); ++i) {
      const double rc = 2.0 * std::pow(0.15 / 2.0,
                                       static_cast<double>(i) /
                                           (bank.size() - 1));
      const double width = std::max(rc / 4.0, 1.8 * grid.dr);
      const double a = amp(rng), zc = off(rng);
      ScalarField w = ScalarField::sample(grid, [=](double r, double z) {
        const double dr = r - rc, dz = z - zc;
        return a * std::exp(-(dr * dr + dz * dz) / (2.0 * width * width));
      });
      const VectorField v = velocity_from_vorticity(w);
      const VelocityBoundsReport rep = velocity_bounds_report(w, v);
      res.rows.push_back({bank[i].id, rc, rep.l4_over_l43, rep.l4_over_l43});
      radii.push_back(rc);
      ratios.push_back(rep.l4_over_l43);
    }
    EstimateCaseSummary s;
    s.id = "biot_l4_over_l43";
    s.expected_power = 0.0;
    const DecayFit fit = decay_fit(radii, ratios);
    s.fitted_power = -fit.slope;
    s.constant_mid = ratios[ratios.size() / 2];
    s.drift_per_decade = std::pow(10.0, fit.slope) - 1.0;
    s.flat = std::abs(s.drift_per_decade) <= 0.10;
    res.summaries.push_back(s);
    return res;
  }

  const std::vector<double> ts =
      log_spaced(DilationFamily::c * 0.45 * 0.45, DilationFamily::c * 4.0,
                 samples);
  for (const auto& cs : bank) {
    // half-plane norms throughout: the 3D-side exponents carry an extra
    // 3/2 factor and are probed by the F functionals instead
    double power = 1.0 / cs.p - 1.0 / cs.q;
    if (kind == EstimateKind::weighted) power += 0.5 * (cs.beta - cs.alpha);
    if (kind == EstimateKind::div) power += 0.5;

    std::vector<double> ratios;
    for (double t : ts) {
      const double lambda = std::sqrt(t / DilationFamily::c);
      const ScalarField f =
          DilationFamily::sample_scaled(grid, lambda, DilationFamily::base);
      double num = 0.0, den = 0.0;
      if (kind == EstimateKind::div) {
        const ScalarField fz = DilationFamily::sample_scaled(
            grid, lambda, DilationFamily::base_z);
        const ScalarField out = (cs.semigroup == 1)
                                    ? s1_div_apply(t, f, fz)
                                    : s2_div_apply(t, f, fz);
        num = lp_norm_omega(out, cs.q);
        den = lp_norm_omega(vector_magnitude(f, fz), cs.p);
      } else {
        const ScalarField out = (cs.semigroup == 1) ? s1_apply(t, f, grid)
                                                    : s2_apply(t, f, grid);
        if (kind == EstimateKind::weighted) {
          num = weighted_lp_norm(out, cs.alpha, cs.q);
          den = weighted_lp_norm(f, cs.beta, cs.p);
        } else {
          num = lp_norm_omega(out, cs.q);
          den = lp_norm_omega(f, cs.p);
        }
      }
      ratios.push_back(num / den);
      res.rows.push_back(
          {cs.id, t, num, (num / den) * std::pow(t, power)});
    }
    res.summaries.push_back(summarize(cs.id, power, ts, ratios));
  }
  return res;
}

void save_sweep_csv(const EstimateSweepResult& res, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write sweep csv: " + path);
  const bool biot = res.kind == EstimateKind::biot;
  out << (biot ? "case,ring_radius,l4_over_l43,constant\n"
                : "case,t,norm,constant\n");
  char buf[160];
  for (const auto& row : res.rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.15g,%.15g,%.15g\n",
                  row.case_id.c_str(), row.t, row.norm, row.constant);
    out << buf;
  }
  out << "# summaries: case,expected_power,fitted_power,constant_mid,"
         "drift_per_decade,flat\n";
  for (const auto& s : res.summaries) {
    std::snprintf(buf, sizeof(buf), "# %s,%.6g,%.6g,%.6g,%.6g,%d\n",
                  s.id.c_str(), s.expected_power, s.fitted_power,
                  s.constant_mid, s.drift_per_decade, s.flat ? 1 : 0);
    out << buf;
  }
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace axibouss
