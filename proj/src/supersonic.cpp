#include "tpshock/supersonic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tpshock {

void BoundaryForcing::validate(int grid_n) {
  if (!(period > 0.0)) throw ConfigError("forcing period must be positive");
  double bound = 0.0;
  const PeriodicFn* fns[3] = {&rho_bar_l, &u_bar_l, &rho_bar_r};
  for (const PeriodicFn* fn : fns) {
    if (!fn->f) continue;
    for (int i = 0; i <= grid_n; ++i) {
      const double t = period * i / grid_n;
      const double v = (*fn)(t);
      const double vp = (*fn)(t + period);
      if (std::abs(v - vp) > 1e-12 * std::max(1.0, std::abs(v))) {
        throw ConfigError("forcing is not T-periodic at t=" +
                          std::to_string(t));
      }
      bound = std::max(bound, std::abs(v));
      bound = std::max(bound, std::abs(fn->deriv(t)));
    }
  }
  c1_bound = bound;
}

namespace {

struct InletPerturbation {
  double phi1;
  double phi2;
};

InletPerturbation inlet_phi(const BoundaryForcing& f, double rho0, double t) {
  const double lr = std::log1p(f.rho_bar_l(t) / rho0);
  const double ub = f.u_bar_l(t);
  return {ub - lr, ub + lr};
}

}  // namespace

SupersonicPeriodicField solve_supersonic_periodic(
    const NozzleProfile& p, const SteadyTransonicSolution& bg,
    const BoundaryForcing& forcing, const SupersonicGrids& grids,
    double tol_sonic) {
  const double T = forcing.period;
  const int nt = grids.nt;
  const int nx = grids.nx;
  const double x_max = bg.x_star + bg.delta;
  const double dx = x_max / nx;
  const double dt = T / nt;
  const double rho0 = bg.supersonic.rho.front();

  // Sanity: the inlet data itself must stay supersonic.
  for (int i = 0; i <= 4 * nt; ++i) {
    const double t = T * i / (4 * nt);
    const double u_in = bg.supersonic.u.front() + forcing.u_bar_l(t);
    if (u_in <= 1.0 + tol_sonic) {
      throw AmplitudeTooLarge("inlet velocity reaches the sonic band");
    }
    if (bg.supersonic.rho.front() + forcing.rho_bar_l(t) <= 0.0) {
      throw AmplitudeTooLarge("inlet density reaches vacuum");
    }
  }

  // Window long enough for every inlet characteristic to flush through.
  const double lam1_floor =
      (bg.supersonic.u.front() - 1.0) * 0.8;
  const int n_rows_extra =
      static_cast<int>(std::ceil((x_max / lam1_floor) / dt)) + 4;
  const int n_rows = nt + n_rows_extra;
  const double t_lo = T - n_rows * dt;

  std::vector<double> row_t(n_rows + 1);
  for (int k = 0; k <= n_rows; ++k) row_t[k] = t_lo + k * dt;

  // Column state (all rows at one x).
  std::vector<double> phi1(n_rows + 1), phi2(n_rows + 1);
  std::vector<double> new1(n_rows + 1), new2(n_rows + 1);
  for (int k = 0; k <= n_rows; ++k) {
    const InletPerturbation ip = inlet_phi(forcing, rho0, row_t[k]);
    phi1[k] = ip.phi1;
    phi2[k] = ip.phi2;
  }

  GridField2D f_phi1, f_phi2;
  f_phi1.resize(nt, nx, T, 0.0, x_max);
  f_phi2.resize(nt, nx, T, 0.0, x_max);
  const int k0 = n_rows - nt;  // row holding t = 0
  auto store_column = [&](int j) {
    for (int i = 0; i <= nt; ++i) {
      f_phi1.at(i, j) = phi1[k0 + i];
      f_phi2.at(i, j) = phi2[k0 + i];
    }
  };
  store_column(0);

  // Clamped cubic interpolation within the window (the rows below the
  // trapezoid of dependence never influence the retained period).
  auto interp_col = [&](const std::vector<double>& col, double t) {
    double f = (t - t_lo) / dt;
    if (f < 0.0) f = 0.0;
    if (f > n_rows) f = n_rows;
    int i = static_cast<int>(std::floor(f));
    i = std::clamp(i, 1, n_rows - 2);
    const double s = f - i;
    const double a = -s * (s - 1) * (s - 2) / 6.0;
    const double b = (s + 1) * (s - 1) * (s - 2) / 2.0;
    const double c = -(s + 1) * s * (s - 2) / 2.0;
    const double d = (s + 1) * s * (s - 1) / 6.0;
    return a * col[i - 1] + b * col[i] + c * col[i + 1] + d * col[i + 2];
  };

  for (int j = 0; j < nx; ++j) {
    const double x1 = (j + 1) * dx;
    const double xm = x1 - 0.5 * dx;
    const double u_star_m = bg.supersonic.state(xm).u;
    const double u_star_1 = bg.supersonic.state(x1).u;
    const double slope_j = p.rel_slope(x1 - dx);
    const double slope_1 = p.rel_slope(x1);
    const double c1_1 = slope_1 / (2.0 * (u_star_1 - 1.0));
    const double c2_1 = slope_1 / (2.0 * (u_star_1 + 1.0));
    const double u_star_j = bg.supersonic.state(x1 - dx).u;

    for (int k = 0; k <= n_rows; ++k) {
      const double t = row_t[k];
      // two-stage foot location per family
      auto foot = [&](int family) {
        const double mean0 = 0.5 * (phi1[k] + phi2[k]);
        const double lam0 = u_star_j + mean0 + (family == 1 ? -1.0 : 1.0);
        if (lam0 <= (family == 1 ? tol_sonic : 0.0)) {
          throw SonicBreakdown("characteristic speed collapsed at x=" +
                               std::to_string(x1 - dx));
        }
        double tf = t - dx / lam0;
        const double pm = 0.5 * (interp_col(phi1, tf) + interp_col(phi2, tf));
        const double lam_m = u_star_m + pm + (family == 1 ? -1.0 : 1.0);
        if (lam_m <= (family == 1 ? tol_sonic : 0.0)) {
          throw SonicBreakdown("characteristic speed collapsed at x=" +
                               std::to_string(x1));
        }
        return t - dx / lam_m;
      };
      const double tf1 = foot(1);
      const double tf2 = foot(2);
      const double p1f = interp_col(phi1, tf1);
      const double p2f_at1 = interp_col(phi2, tf1);
      const double p2f = interp_col(phi2, tf2);
      const double p1f_at2 = interp_col(phi1, tf2);

      const double lam1_f = u_star_j + 0.5 * (p1f + p2f_at1) - 1.0;
      const double lam2_f = u_star_j + 0.5 * (p1f_at2 + p2f) + 1.0;
      if (lam1_f <= tol_sonic) {
        throw SonicBreakdown("supersonic regime lost at x=" +
                             std::to_string(x1 - dx));
      }
      const double c1_j = slope_j / (2.0 * (u_star_j - 1.0));
      const double c2_j = slope_j / (2.0 * (u_star_j + 1.0));
      const double A1 = p1f - 0.5 * dx * c1_j * (p1f + p2f_at1) / lam1_f;
      const double A2 = p2f - 0.5 * dx * c2_j * (p1f_at2 + p2f) / lam2_f;

      // implicit trapezoid leg at the new column; source is linear in phi
      const double lam1_n = u_star_1 + 0.5 * (A1 + A2) - 1.0;
      const double lam2_n = u_star_1 + 0.5 * (A1 + A2) + 1.0;
      if (lam1_n <= tol_sonic) {
        throw SonicBreakdown("supersonic regime lost at x=" +
                             std::to_string(x1));
      }
      const double k1 = 0.5 * dx * c1_1 / lam1_n;
      const double k2 = 0.5 * dx * c2_1 / lam2_n;
      const double s = (A1 + A2) / (1.0 + k1 + k2);
      new1[k] = A1 - k1 * s;
      new2[k] = A2 - k2 * s;
    }
    phi1.swap(new1);
    phi2.swap(new2);
    store_column(j + 1);
  }

  SupersonicPeriodicField out;
  out.T = T;
  out.eps = forcing.amplitude;
  out.rho_bar.resize(nt, nx, T, 0.0, x_max);
  out.u_bar.resize(nt, nx, T, 0.0, x_max);
  for (int i = 0; i <= nt; ++i) {
    for (int j = 0; j <= nx; ++j) {
      const double x = j * dx;
      const GasState base = bg.supersonic.state(x);
      const double ph1 = f_phi1.at(i, j);
      const double ph2 = f_phi2.at(i, j);
      out.rho_bar.at(i, j) = base.rho * std::expm1(0.5 * (ph2 - ph1));
      out.u_bar.at(i, j) = 0.5 * (ph1 + ph2);
    }
  }
  differentiate_t(out.rho_bar, out.dt_rho_bar);
  differentiate_x(out.rho_bar, out.dx_rho_bar);
  differentiate_t(out.u_bar, out.dt_u_bar);
  differentiate_x(out.u_bar, out.dx_u_bar);
  if (out.eps > 0.0) {
    const double sup = std::max(
        {out.rho_bar.max_abs(), out.u_bar.max_abs(), out.dt_rho_bar.max_abs(),
         out.dx_rho_bar.max_abs(), out.dt_u_bar.max_abs(),
         out.dx_u_bar.max_abs()});
    out.measured_gain = sup / out.eps;
  }
  return out;
}

ShockSideSample sample_forcing_at_shock(const SupersonicPeriodicField& f,
                                        double t, double x) {
  if (x < f.rho_bar.x_lo - 1e-12 || x > f.rho_bar.x_hi + 1e-12) {
    throw OutOfDomain("x=" + std::to_string(x) +
                      " outside the supersonic field domain");
  }
  ShockSideSample s;
  s.rho_bar = f.rho_bar.interp(t, x);
  s.u_bar = f.u_bar.interp(t, x);
  s.dt_rho = f.dt_rho_bar.interp(t, x);
  s.dx_rho = f.dx_rho_bar.interp(t, x);
  s.dt_u = f.dt_u_bar.interp(t, x);
  s.dx_u = f.dx_u_bar.interp(t, x);
  return s;
}

}  // namespace tpshock
