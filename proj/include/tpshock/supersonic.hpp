#pragma once

#include <functional>

#include "tpshock/grid_field.hpp"
#include "tpshock/steady.hpp"

namespace tpshock {

/// Smooth T-periodic scalar with an analytic derivative.
struct PeriodicFn {
  std::function<double(double)> f;
  std::function<double(double)> df;

  double operator()(double t) const { return f ? f(t) : 0.0; }
  double deriv(double t) const { return df ? df(t) : 0.0; }
};

/// Inlet/outlet boundary perturbations with a common period.
struct BoundaryForcing {
  double period = 1.0;
  /// Waveform scale; the solvers' smallness heuristics (extension width,
  /// convergence tolerance) are expressed in terms of this.
  double amplitude = 0.0;
  PeriodicFn rho_bar_l;
  PeriodicFn u_bar_l;
  PeriodicFn rho_bar_r;
  /// Measured sup of all forcing values and derivatives (filled by validate).
  double c1_bound = 0.0;

  bool has_left() const {
    return static_cast<bool>(rho_bar_l.f) || static_cast<bool>(u_bar_l.f);
  }
  /// Checks T-periodicity on a fine grid and records the C^1 bound.
  void validate(int grid_n = 512);
};

struct SupersonicGrids {
  int nt = 512;
  int nx = 512;
};

/// Time-periodic perturbation of the supersonic region on [0, x*+delta],
/// stored as (rho - rho_l,*, u - u_l,*) plus first derivatives.
struct SupersonicPeriodicField {
  double T = 1.0;
  GridField2D rho_bar, u_bar;
  GridField2D dt_rho_bar, dx_rho_bar, dt_u_bar, dx_u_bar;
  double eps = 0.0;
  double measured_gain = 0.0;  // sup of all stored arrays divided by eps

  double x_max() const { return rho_bar.x_hi; }
  bool zero() const { return eps == 0.0; }
};

struct ShockSideSample {
  double rho_bar = 0.0;
  double u_bar = 0.0;
  double dt_rho = 0.0;
  double dx_rho = 0.0;
  double dt_u = 0.0;
  double dx_u = 0.0;
};

/// Forward characteristic integration of the full nonlinear system driven by
/// the periodic inlet data; the transient window is long enough for every
/// inlet characteristic to cross the domain, and the final period is kept.
SupersonicPeriodicField solve_supersonic_periodic(
    const NozzleProfile& p, const SteadyTransonicSolution& bg,
    const BoundaryForcing& forcing, const SupersonicGrids& grids = {},
    double tol_sonic = kTolSonic);

ShockSideSample sample_forcing_at_shock(const SupersonicPeriodicField& f,
                                        double t, double x);

}  // namespace tpshock
