#pragma once

#include <vector>

#include "tpshock/gas.hpp"
#include "tpshock/nozzle.hpp"

namespace tpshock {

/// One smooth branch of the steady flow, sampled on an ascending grid.
/// Nodal ODE slopes are stored so the branch can be evaluated as a C^1
/// cubic-Hermite interpolant where solvers need smooth backgrounds.
struct SteadyBranch {
  std::vector<double> x;
  std::vector<double> rho;
  std::vector<double> u;
  std::vector<double> drho;  // d(rho)/dx at nodes
  std::vector<double> du;    // d(u)/dx at nodes
  Regime regime = Regime::Supersonic;

  double x_min() const { return x.front(); }
  double x_max() const { return x.back(); }
  bool contains(double xq, double slack = 1e-10) const {
    return xq >= x.front() - slack && xq <= x.back() + slack;
  }

  /// C^1 cubic-Hermite evaluation (exact at nodes).
  GasState state(double xq) const;
  /// Piecewise-linear evaluation on the same grid.
  GasState state_linear(double xq) const;
  /// Hermite derivatives d(rho)/dx, d(u)/dx at xq.
  std::pair<double, double> slope(double xq) const;
};

struct SteadyTransonicSolution {
  double x_star = 0.0;
  double delta = 0.0;           // extension width of both branches
  double exit_density_target = 0.0;
  SteadyBranch supersonic;      // on [0, x_star + delta]
  SteadyBranch subsonic;        // on [x_star - delta, L]
  NozzleProfile profile;
  GasState inlet;
  /// +1 if exit density grows with shock position, -1 otherwise (measured).
  int exit_density_direction = 0;

  double length() const { return profile.length(); }
  GasState supersonic_at(double x) const { return supersonic.state(x); }
  GasState subsonic_at(double x) const { return subsonic.state(x); }
};

struct FitOptions {
  double fit_tol = 1e-10;
  int max_iter = 200;
  int steps_per_unit = 2000;
  double tol_sonic = kTolSonic;
  /// Extension width; callers derive it from the forcing amplitude
  /// (2*sqrt(eps)); always capped at min(x*, L-x*)/2.
  double delta = 0.05;
};

enum class Side { Left, Right };

/// Fixed-step RK4 integration of the steady ODEs; x1 < x0 integrates
/// backward, but the returned grid is always ascending.
SteadyBranch integrate_branch(const NozzleProfile& p, const GasState& start,
                              double x0, double x1, int n_steps,
                              double tol_sonic = kTolSonic);

/// Steady zero-speed jump, Eq. form rho_r = rho_l u_l^2, u_r = 1/u_l.
GasState steady_jump(const GasState& left);

SteadyTransonicSolution fit_transonic(const NozzleProfile& p,
                                      const GasState& inlet,
                                      double exit_density,
                                      const FitOptions& opts = {});

/// Exit density produced by placing the shock at position s (forward model
/// used to construct self-consistent targets).
double exit_density_for_shock_at(const NozzleProfile& p, const GasState& inlet,
                                 double s, const FitOptions& opts = {});

/// Piecewise-linear accessor into the requested branch.
GasState background_at(const SteadyTransonicSolution& sol, double x, Side side);

}  // namespace tpshock
