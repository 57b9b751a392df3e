#include "axibouss/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace axibouss {

namespace {

constexpr double kSeriesCut = 30.0;

// I_nu(s) = sum_k (s/2)^(2k+nu) / (k! (k+nu)!), all terms positive, so the
// series carries no cancellation and exp(-s) scaling keeps it in range.
double series_scaled(double s, int nu) {
  const double q = 0.25 * s * s;
  double term = (nu == 0) ? 1.0 : 0.5 * s;
  double sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<double>(k) * (k + nu));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return std::exp(-s) * sum;
}

// e^{-s} I_nu(s) ~ (2 pi s)^{-1/2} sum_k (-1)^k a_k(nu) / s^k with
// a_k(nu) = prod_{j=1..k} (4 nu^2 - (2j-1)^2) / (k! 8^k).  Summed to the
// smallest term; at s >= 30 that is well below 1e-13 relative.
double asymptotic_scaled(double s, int nu) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double prev = std::abs(term);
  for (int k = 1; k < 40; ++k) {
    const double f = (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * s);
    term *= -f;
    if (std::abs(term) >= prev) break;  // series started diverging
    sum += term;
    prev = std::abs(term);
    if (prev < 1e-18 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * M_PI * s);
}

double scaled_bessel(double s, int nu) {
  if (s < 0.0) throw std::invalid_argument("scaled bessel: s >= 0 required");
  if (s == 0.0) return nu == 0 ? 1.0 : 0.0;
  return (s <= kSeriesCut) ? series_scaled(s, nu) : asymptotic_scaled(s, nu);
}

}  // namespace

double scaled_bessel_i0(double s) { return scaled_bessel(s, 0); }
double scaled_bessel_i1(double s) { return scaled_bessel(s, 1); }

double n1_profile(double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("n1_profile: tau > 0 required");
  const double s = 0.5 / tau;
  return std::sqrt(M_PI / tau) * scaled_bessel_i1(s);
}

}  // namespace axibouss
