#include "axibouss/elliptic.hpp"

#include <cmath>
#include <stdexcept>

namespace axibouss {

Eigen::VectorXd Tridiag::apply(const Eigen::VectorXd& x) const {
  const int n = size();
  Eigen::VectorXd y(n);
  for (int j = 0; j < n; ++j) {
    double v = diag(j) * x(j);
    if (j > 0) v += lower(j) * x(j - 1);
    if (j + 1 < n) v += upper(j) * x(j + 1);
    y(j) = v;
  }
  return y;
}

namespace {

Tridiag zero_op(int n) {
  Tridiag t;
  t.lower = Eigen::VectorXd::Zero(n);
  t.diag = Eigen::VectorXd::Zero(n);
  t.upper = Eigen::VectorXd::Zero(n);
  return t;
}

// Thomas algorithm; the matrices here are strictly diagonally dominant.
Eigen::VectorXd thomas_solve(const Tridiag& t, double shift,
                             Eigen::VectorXd rhs) {
  const int n = t.size();
  Eigen::VectorXd c(n);
  double denom = t.diag(0) + shift;
  if (denom == 0.0) throw std::runtime_error("tridiagonal solve: zero pivot");
  c(0) = t.upper(0) / denom;
  rhs(0) /= denom;
  for (int j = 1; j < n; ++j) {
    denom = (t.diag(j) + shift) - t.lower(j) * c(j - 1);
    if (denom == 0.0) throw std::runtime_error("tridiagonal solve: zero pivot");
    c(j) = t.upper(j) / denom;
    rhs(j) = (rhs(j) - t.lower(j) * rhs(j - 1)) / denom;
  }
  for (int j = n - 2; j >= 0; --j) rhs(j) -= c(j) * rhs(j + 1);
  return rhs;
}

}  // namespace

Tridiag radial_op_omega(const HalfPlaneGrid& g) {
  const int n = g.nr;
  const double idr2 = 1.0 / (g.dr * g.dr);
  Tridiag t = zero_op(n);
  for (int j = 0; j < n; ++j) {
    const double r = g.r(j);
    const double drift = 1.0 / (2.0 * r * g.dr);
    double lo = idr2 - drift;
    double up = idr2 + drift;
    double di = -2.0 * idr2 - 1.0 / (r * r);
    if (j == 0) {
      // odd reflection: ghost coefficient is idr2 - 1/(2 r0 dr) = 0 exactly
      lo = 0.0;
    }
    if (j == n - 1) {
      di -= up;  // Dirichlet ghost = -value
      up = 0.0;
    }
    t.lower(j) = lo;
    t.diag(j) = di;
    t.upper(j) = up;
  }
  return t;
}

Tridiag radial_op_gamma(const HalfPlaneGrid& g) {
  Tridiag w = radial_op_omega(g);
  const int n = g.nr;
  Tridiag t = zero_op(n);
  t.diag = w.diag;
  for (int j = 0; j < n; ++j) {
    if (j > 0) t.lower(j) = w.lower(j) * g.r(j - 1) / g.r(j);
    if (j + 1 < n) t.upper(j) = w.upper(j) * g.r(j + 1) / g.r(j);
  }
  return t;
}

Tridiag radial_op_rho(const HalfPlaneGrid& g) {
  const int n = g.nr;
  const double idr2 = 1.0 / (g.dr * g.dr);
  Tridiag t = zero_op(n);
  for (int j = 0; j < n; ++j) {
    const double r = g.r(j);
    const double face_lo = j * g.dr;        // r_{j-1/2}; zero at the axis
    const double face_hi = (j + 1) * g.dr;  // r_{j+1/2}
    double lo = face_lo / r * idr2;
    double up = face_hi / r * idr2;
    double di = -(face_lo + face_hi) / r * idr2;
    if (j == n - 1) {
      di -= up;  // Dirichlet ghost
      up = 0.0;
    }
    t.lower(j) = lo;
    t.diag(j) = di;
    t.upper(j) = up;
  }
  return t;
}

Tridiag radial_op_stream(const HalfPlaneGrid& g) {
  const int n = g.nr;
  const double idr2 = 1.0 / (g.dr * g.dr);
  Tridiag t = zero_op(n);
  for (int j = 0; j < n; ++j) {
    const double r = g.r(j);
    const double drift = 1.0 / (2.0 * r * g.dr);
    double lo = idr2 + drift;
    double up = idr2 - drift;
    double di = -2.0 * idr2;
    if (j == 0) {
      di -= lo;  // Dirichlet at the axis face
      lo = 0.0;
    }
    if (j == n - 1) {
      di -= up;
      up = 0.0;
    }
    t.lower(j) = lo;
    t.diag(j) = di;
    t.upper(j) = up;
  }
  return t;
}

SineBasisZ::SineBasisZ(const HalfPlaneGrid& g) {
  const int n = g.nz;
  fwd.resize(n, n);
  inv.resize(n, n);
  eigenvalues.resize(n);
  for (int k = 1; k <= n; ++k) {
    const double weight = (k == n) ? 1.0 / n : 2.0 / n;
    for (int i = 0; i < n; ++i) {
      const double v = std::sin(k * M_PI * (i + 0.5) / n);
      inv(i, k - 1) = v;
      fwd(k - 1, i) = weight * v;
    }
    const double s = std::sin(0.5 * k * M_PI / n);
    eigenvalues(k - 1) = -4.0 * s * s / (g.dz * g.dz);
  }
}

Eigen::MatrixXd apply_dzz(const HalfPlaneGrid& g, const Eigen::MatrixXd& f) {
  const int nr = static_cast<int>(f.rows()), nz = static_cast<int>(f.cols());
  const double idz2 = 1.0 / (g.dz * g.dz);
  Eigen::MatrixXd out(nr, nz);
  for (int i = 0; i < nz; ++i) {
    const Eigen::VectorXd left = (i > 0) ? f.col(i - 1) : (-f.col(0)).eval();
    const Eigen::VectorXd right =
        (i + 1 < nz) ? f.col(i + 1) : (-f.col(nz - 1)).eval();
    out.col(i) = (left - 2.0 * f.col(i) + right) * idz2;
  }
  return out;
}

Eigen::MatrixXd solve_separable(const Tridiag& tr, const SineBasisZ& basis,
                                double a, double b,
                                const Eigen::MatrixXd& rhs) {
  // modes(j, k) = sum_i fwd(k, i) rhs(j, i)
  Eigen::MatrixXd modes = rhs * basis.fwd.transpose();
  const int nz = static_cast<int>(modes.cols());
  Tridiag scaled = tr;
  scaled.lower *= b;
  scaled.diag *= b;
  scaled.upper *= b;
  for (int k = 0; k < nz; ++k) {
    const double shift = a + b * basis.eigenvalues(k);
    modes.col(k) = thomas_solve(scaled, shift, modes.col(k));
  }
  return modes * basis.inv.transpose();
}

Eigen::MatrixXd apply_separable(const Tridiag& tr, const HalfPlaneGrid& g,
                                const Eigen::MatrixXd& f) {
  Eigen::MatrixXd out = apply_dzz(g, f);
  const int nz = static_cast<int>(f.cols());
  for (int i = 0; i < nz; ++i) out.col(i) += tr.apply(f.col(i));
  return out;
}

}  // namespace axibouss
