#include "tpshock/periodic_ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tpshock {

namespace {

double omega_val(const ForcedScalarODE& ode, int i, double t, double psi) {
  return ode.omega[i] ? ode.omega[i](t, psi) : 0.0;
}

double rhs_val(const ForcedScalarODE& ode, double t, double psi) {
  return ode.xi(psi, omega_val(ode, 0, t, psi), omega_val(ode, 1, t, psi),
                omega_val(ode, 2, t, psi));
}

double rk4_flow(const ForcedScalarODE& ode, double t0, double x0, double tau,
                int n_steps) {
  const double h = tau / n_steps;
  double psi = x0;
  for (int k = 0; k < n_steps; ++k) {
    const double t = t0 + k * h;
    const double k1 = rhs_val(ode, t, psi);
    const double k2 = rhs_val(ode, t + 0.5 * h, psi + 0.5 * h * k1);
    const double k3 = rhs_val(ode, t + 0.5 * h, psi + 0.5 * h * k2);
    const double k4 = rhs_val(ode, t + h, psi + h * k3);
    psi += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return psi;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// sup over a (t, psi) grid of |w_i| and |dw_i/dt| (central differences).
struct ForcingNorms {
  std::array<double, 3> sup{0, 0, 0};
  std::array<double, 3> sup_dt{0, 0, 0};
};

ForcingNorms forcing_norms(const ForcedScalarODE& ode, double psi_radius) {
  const int nt = 256;
  const int np = 8;
  const double T = ode.period;
  const double ht = T / 4096.0;
  ForcingNorms n;
  for (int i = 0; i < 3; ++i) {
    if (!ode.omega[i]) continue;
    for (int k = 0; k < nt; ++k) {
      const double t = T * k / nt;
      for (int j = 0; j <= np; ++j) {
        const double psi = psi_radius * (2.0 * j / np - 1.0);
        n.sup[i] = std::max(n.sup[i], std::abs(ode.omega[i](t, psi)));
        const double d =
            (ode.omega[i](t + ht, psi) - ode.omega[i](t - ht, psi)) / (2 * ht);
        n.sup_dt[i] = std::max(n.sup_dt[i], std::abs(d));
      }
    }
  }
  return n;
}

double sigma_star_from(const ForcedScalarODE& ode, const ForcingNorms& n,
                       double safety) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    s += (1.0 + std::abs(ode.dxi_domega0[i])) * n.sup[i];
  }
  return safety * s / std::abs(ode.dxi_dpsi0);
}

}  // namespace

double PeriodicOrbit::sup_psi() const { return sup_abs(psi); }
double PeriodicOrbit::sup_psi_dot() const { return sup_abs(psi_dot); }
double PeriodicOrbit::sup_psi_ddot() const { return sup_abs(psi_ddot); }

double stream(const ForcedScalarODE& ode, double t0, double x0, double tau,
              int n_steps) {
  if (n_steps < 16) throw StepCountTooSmall("stream needs n_steps >= 16");
  return rk4_flow(ode, t0, x0, tau, n_steps);
}

double bracket_radius(const ForcedScalarODE& ode,
                      const PeriodicOdeOptions& opts) {
  if (!(ode.dxi_dpsi0 < 0.0)) {
    throw DomainViolation("ODE is not dissipative: dXi/dpsi(0) >= 0");
  }
  // Two passes: the forcing norms depend on the psi-range they are probed on.
  ForcingNorms n = forcing_norms(ode, 0.0);
  double sigma = sigma_star_from(ode, n, opts.bracket_safety);
  if (sigma == 0.0) return 0.0;
  n = forcing_norms(ode, sigma);
  sigma = sigma_star_from(ode, n, opts.bracket_safety);

  for (double x0 : {sigma, -sigma}) {
    const double x1 = rk4_flow(ode, 0.0, x0, ode.period, opts.n_steps);
    if (std::abs(x1) > sigma * (1.0 + 1e-9)) {
      throw BracketEscape("period map leaves [-sigma*, sigma*]: |" +
                          std::to_string(x1) + "| > " + std::to_string(sigma));
    }
  }
  return sigma;
}

PeriodicOrbit find_periodic(const ForcedScalarODE& ode,
                            const PeriodicOdeOptions& opts) {
  const double T = ode.period;
  const double sigma = bracket_radius(ode, opts);
  PeriodicOrbit orbit;
  orbit.sigma_star = sigma;
  const int n_out = opts.n_out;
  orbit.t.resize(n_out + 1);
  for (int i = 0; i <= n_out; ++i) orbit.t[i] = T * i / n_out;

  if (sigma == 0.0) {
    orbit.psi.assign(n_out + 1, 0.0);
    orbit.psi_dot.assign(n_out + 1, 0.0);
    orbit.psi_ddot.assign(n_out + 1, 0.0);
    orbit.poincare_derivative = 0.0;
    return orbit;
  }

  auto P = [&](double y) { return rk4_flow(ode, 0.0, y, T, opts.n_steps); };

  // Fixed-point iteration with secant acceleration; the period map is a
  // contraction with derivative in (0,1), so this converges from anywhere
  // in the bracket. Bisection fallback if the measured derivative is ~1.
  double x = std::clamp(opts.x0_hint.value_or(0.0), -sigma, sigma);
  double px = P(x);
  double deriv = 0.0;
  bool converged = std::abs(px - x) < opts.fp_tol;
  int it = 0;
  while (!converged && it < opts.max_iter) {
    ++it;
    const double x1 = px;
    const double px1 = P(x1);
    if (x1 != x) deriv = (px1 - x1 == px - x) ? 0.0 : (px1 - px) / (x1 - x);
    if (deriv > 0.98) {
      double lo = -sigma, hi = sigma;
      double glo = P(lo) - lo;
      double mid = 0.0;
      for (int k = 0; k < 200; ++k) {
        mid = 0.5 * (lo + hi);
        const double gm = P(mid) - mid;
        if (std::abs(gm) < opts.fp_tol) break;
        if ((gm > 0) == (glo > 0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      x = mid;
      px = P(x);
      converged = std::abs(px - x) < 10 * opts.fp_tol;
      break;
    }
    if (std::abs(1.0 - deriv) > 1e-12) {
      x = std::clamp(x1 + (px1 - x1) / (1.0 - deriv), -sigma, sigma);
      px = P(x);
    } else {
      x = x1;
      px = px1;
    }
    converged = std::abs(px - x) < opts.fp_tol;
  }
  if (!converged) {
    throw NoConvergence("Poincare fixed point not found in " +
                        std::to_string(opts.max_iter) + " iterations");
  }
  orbit.iterations = it;

  const double h = std::max(1e-9, 1e-3 * sigma);
  orbit.poincare_derivative = (P(x + h) - P(x - h)) / (2 * h);

  // Sample the orbit with the same step size used by the period map so the
  // stored samples close up to fp_tol.
  const int per_out = std::max(1, opts.n_steps / n_out);
  orbit.psi.resize(n_out + 1);
  orbit.psi_dot.resize(n_out + 1);
  orbit.psi_ddot.resize(n_out + 1);
  double psi = x;
  orbit.psi[0] = psi;
  for (int i = 0; i < n_out; ++i) {
    psi = rk4_flow(ode, orbit.t[i], psi, T / n_out, per_out);
    orbit.psi[i + 1] = psi;
  }
  const double ht = T / 4096.0;
  for (int i = 0; i <= n_out; ++i) {
    const double t = orbit.t[i];
    const double p = orbit.psi[i];
    const double pdot = rhs_val(ode, t, p);
    orbit.psi_dot[i] = pdot;
    // chain rule: psi'' = dXi/dpsi psi' + sum_j dXi/dw_j (dw_j/dt + dw_j/dpsi psi')
    std::array<double, 3> w{}, wt{}, wp{};
    for (int j = 0; j < 3; ++j) {
      w[j] = omega_val(ode, j, t, p);
      wt[j] = (omega_val(ode, j, t + ht, p) - omega_val(ode, j, t - ht, p)) /
              (2 * ht);
      const double hp = std::max(1e-9, 1e-3 * std::max(sigma, std::abs(p)));
      wp[j] = (omega_val(ode, j, t, p + hp) - omega_val(ode, j, t, p - hp)) /
              (2 * hp);
    }
    const double hx = std::max(1e-9, 1e-3 * std::max(sigma, std::abs(p)));
    const double dxi_dpsi =
        (ode.xi(p + hx, w[0], w[1], w[2]) - ode.xi(p - hx, w[0], w[1], w[2])) /
        (2 * hx);
    double acc = dxi_dpsi * pdot;
    for (int j = 0; j < 3; ++j) {
      const double hw = std::max(1e-9, 1e-3 * std::max(sigma, std::abs(w[j])));
      std::array<double, 3> wa = w, wb = w;
      wa[j] += hw;
      wb[j] -= hw;
      const double dxi_dwj =
          (ode.xi(p, wa[0], wa[1], wa[2]) - ode.xi(p, wb[0], wb[1], wb[2])) /
          (2 * hw);
      acc += dxi_dwj * (wt[j] + wp[j] * pdot);
    }
    orbit.psi_ddot[i] = acc;
  }
  return orbit;
}

EstimateReport verify_estimates(const PeriodicOrbit& orbit,
                                const ForcedScalarODE& ode, double slack) {
  const double radius = std::max(orbit.sigma_star, orbit.sup_psi());
  const ForcingNorms n = forcing_norms(ode, radius);
  const double xi_psi0 = std::abs(ode.dxi_dpsi0);
  double sum = 0.0, sum_dt = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double xw = 1.0 + std::abs(ode.dxi_domega0[i]);
    sum += xw * n.sup[i];
    sum_dt += xw * n.sup_dt[i];
  }
  EstimateReport r;
  r.norm_psi = orbit.sup_psi();
  r.bound_psi = (1.0 + slack) / xi_psi0 * sum;
  r.norm_psi_dot = orbit.sup_psi_dot();
  r.bound_psi_dot = (1.0 + slack) * (xi_psi0 * r.norm_psi + sum);
  r.norm_psi_ddot = orbit.sup_psi_ddot();
  r.bound_psi_ddot = (2.0 + slack) * xi_psi0 * sum + (1.0 + slack) * sum_dt;
  const double tiny = 1e-15;
  r.pass_psi = r.norm_psi <= r.bound_psi + tiny;
  r.pass_psi_dot = r.norm_psi_dot <= r.bound_psi_dot + tiny;
  r.pass_psi_ddot = r.norm_psi_ddot <= r.bound_psi_ddot + tiny;
  return r;
}

ComparisonReport compare_periodic(const ForcedScalarODE& ode1,
                                  const ForcedScalarODE& ode2, double slack,
                                  const PeriodicOdeOptions& opts) {
  if (ode1.period != ode2.period) {
    throw ConfigError("compare_periodic needs equal periods");
  }
  const PeriodicOrbit o1 = find_periodic(ode1, opts);
  const PeriodicOrbit o2 = find_periodic(ode2, opts);
  const double T = ode1.period;
  const double xi_psi0 = std::abs(ode1.dxi_dpsi0);

  const double radius =
      std::max({o1.sigma_star, o2.sigma_star, o1.sup_psi(), o2.sup_psi()});
  const int nt = 256, np = 8;
  double sum_diff = 0.0;
  for (int i = 0; i < 3; ++i) {
    double sup = 0.0;
    for (int k = 0; k < nt; ++k) {
      const double t = T * k / nt;
      for (int j = 0; j <= np; ++j) {
        const double psi = radius * (2.0 * j / np - 1.0);
        sup = std::max(sup, std::abs(omega_val(ode1, i, t, psi) -
                                     omega_val(ode2, i, t, psi)));
      }
    }
    sum_diff += (1.0 + std::abs(ode1.dxi_domega0[i])) * sup;
  }

  ComparisonReport r;
  double dpsi = 0.0, dpsidot = 0.0;
  for (std::size_t i = 0; i < o1.psi.size(); ++i) {
    dpsi = std::max(dpsi, std::abs(o1.psi[i] - o2.psi[i]));
    dpsidot = std::max(dpsidot, std::abs(o1.psi_dot[i] - o2.psi_dot[i]));
  }
  r.diff_psi = dpsi;
  r.bound_psi = (1.0 + slack) * std::exp(xi_psi0 * T) / xi_psi0 * sum_diff;
  r.diff_psi_dot = dpsidot;
  r.bound_psi_dot = (1.0 + slack) * std::exp(xi_psi0 * T) * sum_diff +
                    (1.0 + slack) * sum_diff;
  const double tiny = 1e-15;
  r.pass_psi = r.diff_psi <= r.bound_psi + tiny;
  r.pass_psi_dot = r.diff_psi_dot <= r.bound_psi_dot + tiny;
  return r;
}

}  // namespace tpshock
