#include "tpshock/steady.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tpshock {

namespace {

struct Rhs {
  double drho;
  double du;
};

Rhs steady_rhs(const NozzleProfile& p, double x, double rho, double u,
               double tol_sonic) {
  const double denom = u * u - 1.0;
  if (std::abs(u - 1.0) < tol_sonic) {
    throw SonicApproach("steady integration reached |u-1|<" +
                        std::to_string(tol_sonic) + " at x=" +
                        std::to_string(x));
  }
  const double s = p.rel_slope(x);
  return {-s * rho * u * u / denom, s * u / denom};
}

int locate(const std::vector<double>& xs, double xq) {
  // index i with xs[i] <= xq <= xs[i+1], clamped to valid segments
  const auto it = std::upper_bound(xs.begin(), xs.end(), xq);
  int i = static_cast<int>(it - xs.begin()) - 1;
  i = std::max(0, std::min(i, static_cast<int>(xs.size()) - 2));
  return i;
}

double hermite(double xq, double x0, double x1, double f0, double f1,
               double d0, double d1) {
  const double h = x1 - x0;
  const double t = (xq - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 +
         (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * h * d1;
}

double hermite_slope(double xq, double x0, double x1, double f0, double f1,
                     double d0, double d1) {
  const double h = x1 - x0;
  const double t = (xq - x0) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * f0 + (3 * t2 - 4 * t + 1) * h * d0 +
          (-6 * t2 + 6 * t) * f1 + (3 * t2 - 2 * t) * h * d1) / h;
}

}  // namespace

GasState SteadyBranch::state(double xq) const {
  if (!contains(xq)) {
    throw OutOfDomain("x=" + std::to_string(xq) + " outside branch [" +
                      std::to_string(x.front()) + "," +
                      std::to_string(x.back()) + "]");
  }
  const int i = locate(x, xq);
  return {hermite(xq, x[i], x[i + 1], rho[i], rho[i + 1], drho[i], drho[i + 1]),
          hermite(xq, x[i], x[i + 1], u[i], u[i + 1], du[i], du[i + 1])};
}

GasState SteadyBranch::state_linear(double xq) const {
  if (!contains(xq)) {
    throw OutOfDomain("x=" + std::to_string(xq) + " outside branch [" +
                      std::to_string(x.front()) + "," +
                      std::to_string(x.back()) + "]");
  }
  const int i = locate(x, xq);
  const double t = (xq - x[i]) / (x[i + 1] - x[i]);
  return {(1 - t) * rho[i] + t * rho[i + 1], (1 - t) * u[i] + t * u[i + 1]};
}

std::pair<double, double> SteadyBranch::slope(double xq) const {
  if (!contains(xq)) {
    throw OutOfDomain("x=" + std::to_string(xq) + " outside branch");
  }
  const int i = locate(x, xq);
  return {
      hermite_slope(xq, x[i], x[i + 1], rho[i], rho[i + 1], drho[i], drho[i + 1]),
      hermite_slope(xq, x[i], x[i + 1], u[i], u[i + 1], du[i], du[i + 1])};
}

SteadyBranch integrate_branch(const NozzleProfile& p, const GasState& start,
                              double x0, double x1, int n_steps,
                              double tol_sonic) {
  if (n_steps < 1) throw StepCountTooSmall("n_steps must be >= 1");
  if (classify(start, tol_sonic) == Regime::Sonic) {
    throw SonicApproach("start state within sonic band");
  }
  const double h = (x1 - x0) / n_steps;
  std::vector<double> xs(n_steps + 1), rs(n_steps + 1), us(n_steps + 1);
  double rho = start.rho;
  double u = start.u;
  xs[0] = x0;
  rs[0] = rho;
  us[0] = u;
  for (int k = 0; k < n_steps; ++k) {
    const double x = x0 + k * h;
    const Rhs k1 = steady_rhs(p, x, rho, u, tol_sonic);
    const Rhs k2 = steady_rhs(p, x + 0.5 * h, rho + 0.5 * h * k1.drho,
                              u + 0.5 * h * k1.du, tol_sonic);
    const Rhs k3 = steady_rhs(p, x + 0.5 * h, rho + 0.5 * h * k2.drho,
                              u + 0.5 * h * k2.du, tol_sonic);
    const Rhs k4 =
        steady_rhs(p, x + h, rho + h * k3.drho, u + h * k3.du, tol_sonic);
    rho += h / 6.0 * (k1.drho + 2 * k2.drho + 2 * k3.drho + k4.drho);
    u += h / 6.0 * (k1.du + 2 * k2.du + 2 * k3.du + k4.du);
    // a step that lands in the band or jumps across it both mean the
    // integration ran into the sonic singularity
    if (std::abs(u - 1.0) < tol_sonic ||
        (u > 1.0) != (start.u > 1.0) || !std::isfinite(u)) {
      throw SonicApproach("sonic approach during branch integration");
    }
    xs[k + 1] = x0 + (k + 1) * h;
    rs[k + 1] = rho;
    us[k + 1] = u;
  }
  SteadyBranch b;
  b.regime = classify(start, tol_sonic);
  if (h < 0.0) {
    std::reverse(xs.begin(), xs.end());
    std::reverse(rs.begin(), rs.end());
    std::reverse(us.begin(), us.end());
  }
  b.x = std::move(xs);
  b.rho = std::move(rs);
  b.u = std::move(us);
  b.drho.resize(b.x.size());
  b.du.resize(b.x.size());
  for (std::size_t i = 0; i < b.x.size(); ++i) {
    const Rhs r = steady_rhs(p, b.x[i], b.rho[i], b.u[i], tol_sonic);
    b.drho[i] = r.drho;
    b.du[i] = r.du;
  }
  return b;
}

GasState steady_jump(const GasState& left) {
  return {left.rho * left.u * left.u, 1.0 / left.u};
}

namespace {

int steps_for(double len, int per_unit) {
  return std::max(2, static_cast<int>(std::ceil(std::abs(len) * per_unit)));
}

double exit_density(const NozzleProfile& p, const GasState& inlet, double s,
                    const FitOptions& opts) {
  const SteadyBranch sup =
      integrate_branch(p, inlet, 0.0, s, steps_for(s, opts.steps_per_unit),
                       opts.tol_sonic);
  const GasState right = steady_jump({sup.rho.back(), sup.u.back()});
  const double tail = p.length() - s;
  const SteadyBranch sub =
      integrate_branch(p, right, s, p.length(),
                       steps_for(tail, opts.steps_per_unit), opts.tol_sonic);
  return sub.rho.back();
}

// Concatenate two branches that share their ascending grids end-to-start.
SteadyBranch merge(SteadyBranch lo, const SteadyBranch& hi) {
  lo.x.insert(lo.x.end(), hi.x.begin() + 1, hi.x.end());
  lo.rho.insert(lo.rho.end(), hi.rho.begin() + 1, hi.rho.end());
  lo.u.insert(lo.u.end(), hi.u.begin() + 1, hi.u.end());
  lo.drho.insert(lo.drho.end(), hi.drho.begin() + 1, hi.drho.end());
  lo.du.insert(lo.du.end(), hi.du.begin() + 1, hi.du.end());
  return lo;
}

}  // namespace

double exit_density_for_shock_at(const NozzleProfile& p, const GasState& inlet,
                                 double s, const FitOptions& opts) {
  return exit_density(p, inlet, s, opts);
}

SteadyTransonicSolution fit_transonic(const NozzleProfile& p,
                                      const GasState& inlet,
                                      double exit_density_target,
                                      const FitOptions& opts) {
  if (classify(inlet, opts.tol_sonic) != Regime::Supersonic) {
    throw DomainViolation("inlet must be supersonic for a transonic fit");
  }
  const double L = p.length();
  double s_lo = 1e-4 * L;
  double s_hi = (1.0 - 1e-4) * L;
  double r_lo = exit_density(p, inlet, s_lo, opts);
  double r_hi = exit_density(p, inlet, s_hi, opts);
  const double att_lo = std::min(r_lo, r_hi);
  const double att_hi = std::max(r_lo, r_hi);
  if (exit_density_target < att_lo || exit_density_target > att_hi) {
    throw ExitDensityUnattainable(
        "exit density " + std::to_string(exit_density_target) +
            " outside attainable [" + std::to_string(att_lo) + "," +
            std::to_string(att_hi) + "]",
        att_lo, att_hi);
  }
  const int direction = r_hi > r_lo ? +1 : -1;
  auto f = [&](double s) {
    return exit_density(p, inlet, s, opts) - exit_density_target;
  };
  double f_lo = r_lo - exit_density_target;
  double f_hi = r_hi - exit_density_target;
  if (f_lo == 0.0) f_lo = -direction * 1e-300;
  if (f_hi == 0.0) f_hi = direction * 1e-300;
  if ((f_lo > 0) == (f_hi > 0)) {
    throw NonMonotoneResidual("bisection bracket invalid: residual has equal "
                              "signs at both probes");
  }
  double s_mid = 0.5 * (s_lo + s_hi);
  double f_mid = 0.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    s_mid = 0.5 * (s_lo + s_hi);
    f_mid = f(s_mid);
    if (std::abs(f_mid) < opts.fit_tol || (s_hi - s_lo) < 1e-15 * L) break;
    if ((f_mid > 0) == (f_hi > 0)) {
      s_hi = s_mid;
      f_hi = f_mid;
    } else {
      s_lo = s_mid;
      f_lo = f_mid;
    }
  }
  if (std::abs(f_mid) >= opts.fit_tol && (s_hi - s_lo) >= 1e-12 * L) {
    throw NoConvergence("transonic fit did not reach fit_tol");
  }

  SteadyTransonicSolution sol;
  sol.profile = p;
  sol.inlet = inlet;
  sol.x_star = s_mid;
  sol.exit_density_target = exit_density_target;
  sol.exit_density_direction = direction;
  sol.delta =
      std::min(opts.delta, 0.5 * std::min(s_mid, L - s_mid));

  // Rebuild both branches with x* as an exact grid node, then extend.
  const int per = opts.steps_per_unit;
  SteadyBranch sup_main =
      integrate_branch(p, inlet, 0.0, s_mid, steps_for(s_mid, per),
                       opts.tol_sonic);
  const GasState left{sup_main.rho.back(), sup_main.u.back()};
  const GasState right = steady_jump(left);
  SteadyBranch sup_ext =
      integrate_branch(p, left, s_mid, s_mid + sol.delta,
                       steps_for(sol.delta, per), opts.tol_sonic);
  sol.supersonic = merge(std::move(sup_main), sup_ext);

  SteadyBranch sub_ext =
      integrate_branch(p, right, s_mid, s_mid - sol.delta,
                       steps_for(sol.delta, per), opts.tol_sonic);
  SteadyBranch sub_main =
      integrate_branch(p, right, s_mid, L, steps_for(L - s_mid, per),
                       opts.tol_sonic);
  sol.subsonic = merge(std::move(sub_ext), sub_main);
  return sol;
}

GasState background_at(const SteadyTransonicSolution& sol, double x,
                       Side side) {
  const SteadyBranch& b =
      side == Side::Left ? sol.supersonic : sol.subsonic;
  return b.state_linear(x);
}

}  // namespace tpshock
