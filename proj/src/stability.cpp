#include "tpshock/stability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tpshock {

namespace {

struct UniformGrid {
  double x0 = 0.0;
  double dx = 0.0;
  int n = 0;  // nodes = n + 1

  double x(int j) const { return x0 + j * dx; }
  double x_max() const { return x0 + n * dx; }
};

UniformGrid grid_from(const std::vector<double>& xs) {
  UniformGrid g;
  g.x0 = xs.front();
  g.n = static_cast<int>(xs.size()) - 1;
  g.dx = (xs.back() - xs.front()) / g.n;
  return g;
}

double lin_interp(const std::vector<double>& v, const UniformGrid& g,
                  double x) {
  double f = (x - g.x0) / g.dx;
  if (f < 0.0) f = 0.0;
  if (f > g.n) f = g.n;
  int j = static_cast<int>(f);
  if (j >= g.n) j = g.n - 1;
  const double s = f - j;
  return (1 - s) * v[j] + s * v[j + 1];
}

// One-sided linear evaluation at x using the first nodes at or right of xs.
double one_sided_right(const std::vector<double>& v, const UniformGrid& g,
                       double x) {
  int k = static_cast<int>(std::ceil((x - g.x0) / g.dx - 1e-12));
  k = std::clamp(k, 0, g.n - 1);
  const double s = (x - g.x(k)) / g.dx;  // s <= 0 extrapolates leftward
  return v[k] + s * (v[k + 1] - v[k]);
}

double bump_profile(double x, double a, double b) {
  if (x <= a || x >= b) return 0.0;
  const double s = std::sin(M_PI * (x - a) / (b - a));
  return s * s;
}

}  // namespace

PiecewiseInitialData init_from_steady(const SteadyTransonicSolution& bg,
                                      double offset, int nx_left,
                                      int nx_right, double x_lo_right) {
  PiecewiseInitialData d;
  d.shock_position = bg.x_star + offset;
  const double x_hi_left = bg.x_star + bg.delta;
  d.left_x.resize(nx_left + 1);
  d.left_states.resize(nx_left + 1);
  for (int j = 0; j <= nx_left; ++j) {
    d.left_x[j] = x_hi_left * j / nx_left;
    d.left_states[j] = bg.supersonic.state(d.left_x[j]);
  }
  d.right_x.resize(nx_right + 1);
  d.right_states.resize(nx_right + 1);
  for (int j = 0; j <= nx_right; ++j) {
    d.right_x[j] =
        x_lo_right + (bg.length() - x_lo_right) * j / nx_right;
    d.right_states[j] = bg.subsonic.state(d.right_x[j]);
  }
  d.perturbation_size = std::abs(offset);
  return d;
}

PiecewiseInitialData init_from_periodic(
    const TimePeriodicTransonicSolution& periodic, double offset,
    double bump_amplitude, int nx_left, int nx_right) {
  const SteadyTransonicSolution& bg = periodic.background;
  PiecewiseInitialData d;
  d.shock_position = periodic.shock.gamma.front() + offset;
  const double x_hi_left = periodic.supersonic.zero()
                               ? bg.x_star + bg.delta
                               : periodic.supersonic.x_max();
  d.left_x.resize(nx_left + 1);
  d.left_states.resize(nx_left + 1);
  for (int j = 0; j <= nx_left; ++j) {
    d.left_x[j] = x_hi_left * j / nx_left;
    d.left_states[j] = periodic.supersonic_state(0.0, d.left_x[j]);
  }
  const double x_lo = periodic.field.x_lo();
  const double a = bg.x_star + 0.1 * (bg.length() - bg.x_star);
  const double b = bg.x_star + 0.6 * (bg.length() - bg.x_star);
  d.right_x.resize(nx_right + 1);
  d.right_states.resize(nx_right + 1);
  double dev = std::abs(d.shock_position - bg.x_star);
  for (int j = 0; j <= nx_right; ++j) {
    const double x = x_lo + (bg.length() - x_lo) * j / nx_right;
    d.right_x[j] = x;
    const double bump = bump_amplitude * bump_profile(x, a, b);
    const RiemannPair base = to_riemann(bg.subsonic.state(x));
    const RiemannPair y{
        base.y1 + periodic.field.phi1_hat.interp(0.0, x) + bump,
        base.y2 + periodic.scaling.alpha *
                      (periodic.field.phi2_hat.interp(0.0, x) + bump)};
    d.right_states[j] = from_riemann(y);
    const GasState steady = bg.subsonic.state(x);
    dev = std::max({dev, std::abs(d.right_states[j].rho - steady.rho),
                    std::abs(d.right_states[j].u - steady.u)});
  }
  d.perturbation_size = dev;
  return d;
}

TrackedTrajectory solve_ibvp(const SteadyTransonicSolution& bg,
                             const BoundaryForcing& forcing,
                             const ScalingConfig& scaling,
                             const PiecewiseInitialData& init, double t_end,
                             const IbvpOptions& opts,
                             const TimePeriodicTransonicSolution* reference) {
  const double L = bg.length();
  const double alpha = scaling.alpha;
  const double tol_sonic = opts.tol_sonic;
  const UniformGrid gl = grid_from(init.left_x);
  const UniformGrid gr = grid_from(init.right_x);
  const int nl = gl.n;
  const int nr = gr.n;
  const PeriodicFn phi_exit = exit_forcing_phi(forcing, bg);

  // Background samples along both grids.
  std::vector<double> uL(nl + 1), rL(nl + 1), c1L(nl + 1), c2L(nl + 1);
  std::vector<double> y1L(nl + 1), y2L(nl + 1);
  for (int j = 0; j <= nl; ++j) {
    const GasState s = bg.supersonic.state(gl.x(j));
    const double slope = bg.profile.rel_slope(std::min(gl.x(j), L));
    uL[j] = s.u;
    rL[j] = s.rho;
    c1L[j] = slope / (2.0 * (s.u - 1.0));
    c2L[j] = slope / (2.0 * (s.u + 1.0));
    const RiemannPair y = to_riemann(s);
    y1L[j] = y.y1;
    y2L[j] = y.y2;
  }
  std::vector<double> uR(nr + 1), rR(nr + 1), c1R(nr + 1), c2R(nr + 1);
  std::vector<double> y1R(nr + 1), y2R(nr + 1);
  for (int j = 0; j <= nr; ++j) {
    const GasState s = bg.subsonic.state(gr.x(j));
    const double slope = bg.profile.rel_slope(gr.x(j));
    uR[j] = s.u;
    rR[j] = s.rho;
    c1R[j] = slope / (2.0 * (s.u - 1.0));
    c2R[j] = slope / (2.0 * (s.u + 1.0));
    const RiemannPair y = to_riemann(s);
    y1R[j] = y.y1;
    y2R[j] = y.y2;
  }

  // State in perturbation invariants (right side scaled by 1/alpha).
  std::vector<double> l1(nl + 1), l2(nl + 1), r1(nr + 1), r2(nr + 1);
  for (int j = 0; j <= nl; ++j) {
    const RiemannPair y = to_riemann(init.left_states[j]);
    l1[j] = y.y1 - y1L[j];
    l2[j] = y.y2 - y2L[j];
  }
  for (int j = 0; j <= nr; ++j) {
    const RiemannPair y = to_riemann(init.right_states[j]);
    r1[j] = y.y1 - y1R[j];
    r2[j] = (y.y2 - y2R[j]) / alpha;
  }
  double gamma = init.shock_position;

  double lamL_max = 0.0, lam2R_max = 0.0, lam1R_max = 0.0;
  for (int j = 0; j <= nl; ++j) lamL_max = std::max(lamL_max, uL[j] + 1.0);
  for (int j = 0; j <= nr; ++j) {
    lam2R_max = std::max(lam2R_max, uR[j] + 1.0);
    lam1R_max = std::max(lam1R_max, 1.0 - uR[j]);
  }
  const double dt_raw =
      opts.cfl * std::min({gl.dx / (lamL_max + 0.1),
                           gr.dx / (lam2R_max + 0.1),
                           gr.dx / (lam1R_max + 0.1)});
  const int n_steps = std::max(1, static_cast<int>(std::ceil(t_end / dt_raw)));
  const double dt = t_end / n_steps;

  auto left_prim_at = [&](double x) {
    const double p1 = lin_interp(l1, gl, x);
    const double p2 = lin_interp(l2, gl, x);
    const GasState base = bg.supersonic.state(std::clamp(x, gl.x0, gl.x_max()));
    const RiemannPair y = to_riemann(base);
    return from_riemann({y.y1 + p1, y.y2 + p2});
  };
  auto right_prim_one_sided = [&](double x) {
    const double p1 = one_sided_right(r1, gr, x);
    const double p2 = alpha * one_sided_right(r2, gr, x);
    const GasState base = bg.subsonic.state(std::clamp(x, gr.x0, gr.x_max()));
    const RiemannPair y = to_riemann(base);
    return from_riemann({y.y1 + p1, y.y2 + p2});
  };
  auto shock_speed = [&](double g) {
    const GasState left = left_prim_at(g);
    const GasState right = right_prim_one_sided(g);
    if (!(right.rho > left.rho)) {
      throw AdmissibilityLost("shock lost compressivity at x=" +
                              std::to_string(g));
    }
    return left.u - std::sqrt(right.rho / left.rho);
  };
  auto trace_phi2hat = [&](double g, double v) {
    const GasState left = left_prim_at(g);
    const GasState right = rh_jump_moving(left, v);
    const GasState base = bg.subsonic.state(std::clamp(g, gr.x0, gr.x_max()));
    return (right.u + std::log(right.rho) -
            (base.u + std::log(base.rho))) / alpha;
  };
  auto inlet_phi = [&](double tc) {
    const double lr = std::log1p(forcing.rho_bar_l(tc) / rL[0]);
    const double ub = forcing.u_bar_l(tc);
    return std::pair<double, double>{ub - lr, ub + lr};
  };
  auto mass_integral = [&](double g) {
    // a-weighted density over [0, g] from the left field, [g, L] right.
    double m = 0.0;
    auto a_of = [&](double x) { return bg.profile.area(std::min(x, L)); };
    for (int j = 0; j < nl; ++j) {
      const double xa = gl.x(j), xb = gl.x(j + 1);
      if (xa >= g) break;
      const double hb = std::min(xb, g);
      const GasState sa = left_prim_at(xa);
      const GasState sb = left_prim_at(hb);
      m += 0.5 * (sa.rho * a_of(xa) + sb.rho * a_of(hb)) * (hb - xa);
    }
    for (int j = 0; j < nr; ++j) {
      const double xa = gr.x(j), xb = gr.x(j + 1);
      if (xb <= g) continue;
      const double ha = std::max(xa, g);
      const GasState sa = right_prim_one_sided(ha);
      const GasState sb = right_prim_one_sided(xb);
      m += 0.5 * (sa.rho * a_of(ha) + sb.rho * a_of(xb)) * (xb - ha);
    }
    return m;
  };

  TrackedTrajectory traj;
  traj.has_reference = reference != nullptr;
  traj.left_x = init.left_x;
  traj.right_x = init.right_x;
  traj.t_end = t_end;

  std::vector<double> l1n(nl + 1), l2n(nl + 1), r1n(nr + 1), r2n(nr + 1);
  double t = 0.0;
  double mass_prev = mass_integral(gamma);

  auto record_metrics = [&](double tc, double g, double v) {
    traj.metric_t.push_back(tc);
    if (!reference) return;
    const TimePeriodicTransonicSolution& ref = *reference;
    const double g_ref = ref.shock.gamma_at(tc);
    double th = 0.0, prim = 0.0;
    const double lo = std::max(g, g_ref);
    for (int j = 0; j <= nr; ++j) {
      const double x = gr.x(j);
      if (x < lo) continue;
      th = std::max(th, std::abs(r1[j] - ref.field.phi1_hat.interp(tc, x)));
      th = std::max(th, std::abs(r2[j] - ref.field.phi2_hat.interp(tc, x)));
      const RiemannPair y{y1R[j] + r1[j], y2R[j] + alpha * r2[j]};
      const GasState s = from_riemann(y);
      const GasState sr = ref.subsonic_state(tc, x);
      prim = std::max({prim, std::abs(s.rho - sr.rho), std::abs(s.u - sr.u)});
    }
    double gap_l = 0.0;
    const double hi = std::min(g, g_ref);
    for (int j = 0; j <= nl; ++j) {
      const double x = gl.x(j);
      if (x > hi) break;
      const RiemannPair y{y1L[j] + l1[j], y2L[j] + l2[j]};
      const GasState s = from_riemann(y);
      const GasState sr = ref.supersonic_state(tc, x);
      gap_l = std::max({gap_l, std::abs(s.rho - sr.rho),
                        std::abs(s.u - sr.u)});
    }
    traj.theta.push_back(th);
    traj.prim_gap_sub.push_back(prim);
    traj.supersonic_gap.push_back(gap_l);
    traj.shock_gap.push_back(std::abs(g - g_ref));
    traj.shock_dot_gap.push_back(std::abs(v - ref.shock.gamma_dot_at(tc)));
  };

  {
    const double v0 = shock_speed(gamma);
    traj.t.push_back(0.0);
    traj.gamma.push_back(gamma);
    traj.gamma_dot.push_back(v0);
    record_metrics(0.0, gamma, v0);
    // admissibility of the initial data
    const GasState left = left_prim_at(gamma);
    const GasState right = right_prim_one_sided(gamma);
    if (!lax_admissible(left, right, v0)) {
      throw AdmissibilityLost("initial data not Lax-admissible");
    }
  }

  for (int step = 0; step < n_steps; ++step) {
    const double v1 = shock_speed(gamma);
    const double g_mid = gamma + 0.5 * dt * v1;
    const double v_mid = shock_speed(g_mid);
    const double g_new = gamma + dt * v_mid;

    // left region: both families run rightward
    for (int j = 0; j <= nl; ++j) {
      const double mean = 0.5 * (l1[j] + l2[j]);
      const double u = uL[j] + mean;
      if (u <= 1.0 + tol_sonic) {
        throw SonicBreakdown("supersonic region lost at x=" +
                             std::to_string(gl.x(j)));
      }
      const double x = gl.x(j);
      const double q = l1[j] + l2[j];
      for (int fam = 1; fam <= 2; ++fam) {
        const double lam = fam == 1 ? u - 1.0 : u + 1.0;
        const double foot = x - lam * dt;
        double val, src_dt;
        if (foot < gl.x0) {
          const double tc = t + dt - x / lam;
          const auto [f1, f2] = inlet_phi(tc);
          val = fam == 1 ? f1 : f2;
          src_dt = x / lam;
        } else {
          val = lin_interp(fam == 1 ? l1 : l2, gl, foot);
          src_dt = dt;
        }
        const double c = fam == 1 ? c1L[j] : c2L[j];
        val += src_dt * (-c * q);
        (fam == 1 ? l1n[j] : l2n[j]) = val;
      }
    }

    // right region, second family first (carries the shock trace); the
    // trace is evaluated at the midpoint state the shock was advanced with
    const double trace_now = trace_phi2hat(g_mid, v_mid);
    for (int j = 0; j <= nr; ++j) {
      const double x = gr.x(j);
      const double mean = 0.5 * (r1[j] + alpha * r2[j]);
      const double lam2 = uR[j] + 1.0 + mean;
      const double q2 = r1[j] / alpha + r2[j];
      const double foot = x - lam2 * dt;
      double val, src_dt;
      if (foot < gamma && x >= gamma) {
        val = trace_now;
        src_dt = (x - gamma) / lam2;
      } else if (x < gamma) {
        val = r2[j];  // ghost; rewritten below
        src_dt = 0.0;
      } else {
        val = lin_interp(r2, gr, foot);
        src_dt = dt;
      }
      r2n[j] = val + src_dt * (-c2R[j] * q2);
    }
    for (int j = 0; j <= nr; ++j) {
      const double x = gr.x(j);
      const double mean = 0.5 * (r1[j] + alpha * r2[j]);
      const double lam1 = uR[j] - 1.0 + mean;
      if (lam1 >= -tol_sonic) {
        throw SonicBreakdown("subsonic region lost at x=" +
                             std::to_string(x));
      }
      const double q1 = r1[j] + alpha * r2[j];
      const double foot = x - lam1 * dt;  // foot > x
      double val, src_dt;
      if (foot > gr.x_max()) {
        const double tc = t + dt - (gr.x_max() - x) / (-lam1);
        val = phi_exit(tc) + alpha * r2n[nr];
        src_dt = (gr.x_max() - x) / (-lam1);
      } else {
        val = lin_interp(r1, gr, foot);
        src_dt = dt;
      }
      r1n[j] = val + src_dt * (-c1R[j] * q1);
    }

    l1.swap(l1n);
    l2.swap(l2n);
    r1.swap(r1n);
    r2.swap(r2n);
    gamma = g_new;
    t = (step + 1 == n_steps) ? t_end : t + dt;

    // ghost nodes behind the shock: linear extrapolation from the interior
    {
      int k = static_cast<int>(std::ceil((gamma - gr.x0) / gr.dx - 1e-12));
      k = std::clamp(k, 0, nr - 1);
      for (int j = k - 1; j >= 0; --j) {
        r1[j] = 2.0 * r1[j + 1] - r1[j + 2];
        r2[j] = 2.0 * r2[j + 1] - r2[j + 2];
      }
    }

    const double v_new = shock_speed(gamma);
    traj.t.push_back(t);
    traj.gamma.push_back(gamma);
    traj.gamma_dot.push_back(v_new);

    if (gamma <= gr.x0 + 4 * gr.dx || gamma >= gl.x_max() - 4 * gl.dx ||
        gamma <= 0.0 || gamma >= L) {
      throw ShockExitsDomain("shock reached x=" + std::to_string(gamma) +
                             " at t=" + std::to_string(t));
    }
    if ((step + 1) % opts.check_stride == 0 || step + 1 == n_steps) {
      const GasState left = left_prim_at(gamma);
      const GasState right = right_prim_one_sided(gamma);
      if (!lax_admissible(left, right, v_new)) {
        throw AdmissibilityLost("Lax condition failed at t=" +
                                std::to_string(t));
      }
    }
    if ((step + 1) % opts.check_stride == 0) {
      const double m_now = mass_integral(gamma);
      const GasState in{rL[0] + forcing.rho_bar_l(t),
                        uL[0] + forcing.u_bar_l(t)};
      const GasState outs = right_prim_one_sided(gr.x_max());
      const double flux_in = bg.profile.area(0.0) * in.rho * in.u;
      const double flux_out = bg.profile.area(L) * outs.rho * outs.u;
      const double dt_window = opts.check_stride * dt;
      traj.mass_residual.push_back(
          std::abs((m_now - mass_prev) / dt_window + flux_out - flux_in));
      mass_prev = m_now;
    }
    if (step % opts.metrics_stride == 0 || step + 1 == n_steps) {
      record_metrics(t, gamma, v_new);
    }
  }

  traj.left_final.resize(nl + 1);
  for (int j = 0; j <= nl; ++j) {
    traj.left_final[j] = from_riemann({y1L[j] + l1[j], y2L[j] + l2[j]});
  }
  traj.right_final.resize(nr + 1);
  for (int j = 0; j <= nr; ++j) {
    traj.right_final[j] =
        from_riemann({y1R[j] + r1[j], y2R[j] + alpha * r2[j]});
  }
  return traj;
}

StabilityReport measure_decay(const TrackedTrajectory& traj,
                              const TimePeriodicTransonicSolution& periodic) {
  if (!traj.has_reference) {
    throw ConfigError("trajectory was run without a reference solution");
  }
  StabilityReport rep;
  rep.T0 = compute_T0(periodic);
  if (traj.t_end < 3.0 * rep.T0) {
    throw WindowTooShort("t_end=" + std::to_string(traj.t_end) +
                         " shorter than 3 T0=" + std::to_string(3 * rep.T0));
  }
  const int n_windows = static_cast<int>(traj.t_end / rep.T0);
  rep.window_theta_max.assign(n_windows, 0.0);
  rep.window_shock_gap_max.assign(n_windows, 0.0);
  for (std::size_t i = 0; i < traj.metric_t.size(); ++i) {
    const int w = std::min(n_windows - 1,
                           static_cast<int>(traj.metric_t[i] / rep.T0));
    rep.window_theta_max[w] =
        std::max(rep.window_theta_max[w], traj.theta[i]);
    rep.window_shock_gap_max[w] =
        std::max(rep.window_shock_gap_max[w], traj.shock_gap[i]);
  }
  for (int w = 0; w + 1 < n_windows; ++w) {
    rep.window_factors.push_back(
        rep.window_theta_max[w] > 0.0
            ? rep.window_theta_max[w + 1] / rep.window_theta_max[w]
            : 0.0);
  }
  rep.theta_peak =
      *std::max_element(rep.window_theta_max.begin(),
                        rep.window_theta_max.end());

  // log-linear fit over windows 1.. (the first window holds the transient)
  rep.xi_fit_defined = rep.theta_peak > 1e-8 && n_windows >= 4;
  if (rep.xi_fit_defined) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int w = 1; w < n_windows; ++w) {
      if (!(rep.window_theta_max[w] > 0.0)) continue;
      const double xw = w;
      const double yw = std::log(rep.window_theta_max[w]);
      sx += xw;
      sy += yw;
      sxx += xw * xw;
      sxy += xw * yw;
      ++m;
    }
    if (m >= 2) {
      const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      rep.xi_fit = std::exp(slope);
    } else {
      rep.xi_fit_defined = false;
    }
  }

  const SteadyTransonicSolution& bg = periodic.background;
  const double slope_star = bg.profile.rel_slope(bg.x_star);
  const double u_star = bg.supersonic.state(bg.x_star).u;
  const double xi_shock = std::exp(-slope_star * 0.5 * u_star * rep.T0);
  const double xi_field = periodic.scaling.M *
                          (1.0 + periodic.scaling.alpha) /
                          (2.0 * periodic.scaling.alpha);
  rep.xi_theory = std::max(xi_shock, xi_field);
  return rep;
}

double compute_T0_from_velocities(const std::vector<double>& u, double L,
                                  double tol_sonic) {
  double m = 0.0;
  for (double uu : u) {
    if (std::abs(uu - 1.0) < tol_sonic) {
      throw SonicBreakdown("velocity within the sonic band");
    }
    m = std::max(m, 1.0 / std::abs(uu - 1.0));
    m = std::max(m, 1.0 / std::abs(uu + 1.0));
  }
  return L * m;
}

double compute_T0(const TimePeriodicTransonicSolution& periodic,
                  double tol_sonic) {
  std::vector<double> u(periodic.u_r.v.begin(), periodic.u_r.v.end());
  return compute_T0_from_velocities(u, periodic.background.length(),
                                    tol_sonic);
}

}  // namespace tpshock
