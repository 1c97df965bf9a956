#pragma once

#include <cmath>
#include <vector>

namespace tpshock {

/// Scalar field sampled on a uniform (t, x) grid, t-periodic. Row-major,
/// t index first; row 0 and row nt hold the same period endpoint.
struct GridField2D {
  int nt = 0;  // rows = nt + 1 over [0, T]
  int nx = 0;  // cols = nx + 1 over [x_lo, x_hi]
  double T = 1.0;
  double x_lo = 0.0;
  double x_hi = 1.0;
  std::vector<double> v;

  void resize(int nt_, int nx_, double T_, double xlo, double xhi) {
    nt = nt_;
    nx = nx_;
    T = T_;
    x_lo = xlo;
    x_hi = xhi;
    v.assign(static_cast<std::size_t>(nt + 1) * (nx + 1), 0.0);
  }

  double dt() const { return T / nt; }
  double dx() const { return (x_hi - x_lo) / nx; }
  double& at(int it, int ix) {
    return v[static_cast<std::size_t>(it) * (nx + 1) + ix];
  }
  double at(int it, int ix) const {
    return v[static_cast<std::size_t>(it) * (nx + 1) + ix];
  }

  /// Bilinear interpolation, periodic in t, clamped in x.
  double interp(double t, double x) const {
    double tf = (t / T) * nt;
    tf -= std::floor(tf / nt) * nt;  // wrap into [0, nt)
    int it = static_cast<int>(tf);
    if (it >= nt) it = nt - 1;
    const double a = tf - it;
    double xf = (x - x_lo) / dx();
    if (xf < 0.0) xf = 0.0;
    if (xf > nx) xf = nx;
    int ix = static_cast<int>(xf);
    if (ix >= nx) ix = nx - 1;
    const double b = xf - ix;
    return (1 - a) * ((1 - b) * at(it, ix) + b * at(it, ix + 1)) +
           a * ((1 - b) * at(it + 1, ix) + b * at(it + 1, ix + 1));
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
};

/// 4-point Lagrange interpolation on a periodic uniform sample row.
/// `row` has n+1 entries with row[0] == row[n] up to solver tolerance.
inline double cubic_periodic(const std::vector<double>& row, int n, double T,
                             double t) {
  double f = (t / T) * n;
  f -= std::floor(f / n) * n;
  int i = static_cast<int>(std::floor(f));
  const double s = f - i;
  auto val = [&](int k) {
    int j = (i + k - 1) % n;
    if (j < 0) j += n;
    return row[j];
  };
  const double fm1 = val(0), f0 = val(1), f1 = val(2), f2 = val(3);
  // Lagrange basis for nodes at -1, 0, 1, 2 evaluated at s in [0,1].
  const double a = -s * (s - 1) * (s - 2) / 6.0;
  const double b = (s + 1) * (s - 1) * (s - 2) / 2.0;
  const double c = -(s + 1) * s * (s - 2) / 2.0;
  const double d = (s + 1) * s * (s - 1) / 6.0;
  return a * fm1 + b * f0 + c * f1 + d * f2;
}

/// Central differences in t (periodic) of a GridField2D.
void differentiate_t(const GridField2D& f, GridField2D& out);
/// Central differences in x (one-sided at the ends).
void differentiate_x(const GridField2D& f, GridField2D& out);

}  // namespace tpshock
