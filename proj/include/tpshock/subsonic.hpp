#pragma once

#include <utility>
#include <vector>

#include "tpshock/periodic_ode.hpp"
#include "tpshock/shock_algebra.hpp"
#include "tpshock/supersonic.hpp"

namespace tpshock {

/// Scaled perturbation invariants on the extended subsonic strip
/// [x* - delta_ext, L], T-periodic in t.
struct PeriodicField {
  double alpha = 1.0;
  GridField2D phi1_hat, phi2_hat;
  GridField2D dt_phi1, dx_phi1, dt_phi2, dx_phi2;

  double T() const { return phi1_hat.T; }
  double x_lo() const { return phi1_hat.x_lo; }
  double x_hi() const { return phi1_hat.x_hi; }

  double U_at(double t, double x) const {
    return 0.5 * (alpha * phi2_hat.interp(t, x) - phi1_hat.interp(t, x));
  }
  void fill_derivatives();
  /// sup over both value arrays of |this - other| (same grid required).
  double sup_diff(const PeriodicField& other) const;
  double c1_norm() const;
};

/// One period of the shock curve and its first two derivatives.
struct ShockCurve {
  double T = 1.0;
  std::vector<double> t;
  std::vector<double> gamma;
  std::vector<double> gamma_dot;
  std::vector<double> gamma_ddot;

  double gamma_at(double tq) const;
  double gamma_dot_at(double tq) const;
  double max_gamma() const;
  double min_gamma() const;
  double c2_norm(double x_star) const;
};

struct ModulusRow {
  double delta = 0.0;
  double dt_phi1 = 0.0, dx_phi1 = 0.0, dt_phi2 = 0.0, dx_phi2 = 0.0;
};

struct IterationReport {
  std::vector<double> d_history;
  std::vector<double> ratio_history;
  std::vector<double> c1_norm_history;
  std::vector<double> shock_c2_history;
  std::vector<ModulusRow> modulus;
  std::vector<double> rh_residual_mass;
  std::vector<double> rh_residual_momentum;
  double max_rh_residual_mass = 0.0;
  double max_rh_residual_momentum = 0.0;
  double beta_used = 0.0;
  /// The two contraction-rate candidates the measured ratio is compared
  /// against; which one binds depends on the configuration.
  double beta_candidate_reflection = 0.0;  // (1+alpha) M / (2 alpha)
  double beta_candidate_alpha = 0.0;       // alpha
  int iterations = 0;
  bool converged = false;
  double final_d = 0.0;
  double conv_tol = 0.0;
  double periodicity_defect_field = 0.0;
  double periodicity_defect_gamma = 0.0;
  double max_shock_offset = 0.0;
  double sup_phi_hat = 0.0;
};

struct TimePeriodicTransonicSolution {
  SteadyTransonicSolution background;
  ScalingConfig scaling;
  BoundaryForcing forcing;
  SupersonicPeriodicField supersonic;
  PeriodicField field;
  GridField2D rho_r, u_r;  // primitive subsonic fields on the field grid
  ShockCurve shock;
  double T = 1.0;

  GasState subsonic_state(double t, double x) const {
    return {rho_r.interp(t, x), u_r.interp(t, x)};
  }
  GasState supersonic_state(double t, double x) const {
    const GasState base = background.supersonic.state(x);
    if (supersonic.zero()) return base;
    return {base.rho + supersonic.rho_bar.interp(t, x),
            base.u + supersonic.u_bar.interp(t, x)};
  }
};

struct IterationOptions {
  int max_iter = 60;
  /// conv_tol = conv_tol_factor * max(eps, 1e-6)
  double conv_tol_factor = 1e-10;
  int nt = 512;
  int nx = 512;
  double tol_sonic = kTolSonic;
  /// Test hook: freeze the characteristic fields to the steady background.
  bool freeze_coefficients = false;
  std::vector<double> modulus_deltas{0.1, 0.05, 0.02, 0.01, 0.005};
};

/// phi(t) = 2 ln(rhoL* / (rhoL* + rho_bar_r(t))), the exit boundary trace.
PeriodicFn exit_forcing_phi(const BoundaryForcing& forcing,
                            const SteadyTransonicSolution& bg);
/// Same, with the steady exit density passed explicitly.
PeriodicFn exit_forcing_phi_core(double rho_exit_star,
                                 const PeriodicFn& rho_bar_r);

PeriodicField transport_step(const PeriodicField& prev,
                             const ShockCurve& prev_shock,
                             const SupersonicPeriodicField& sup,
                             const BoundaryForcing& forcing,
                             const SteadyTransonicSolution& bg,
                             const ScalingConfig& scaling,
                             const IterationOptions& opts = {});

ShockCurve shock_step(const PeriodicField& field,
                      const SupersonicPeriodicField& sup,
                      const SteadyTransonicSolution& bg,
                      const ScalingConfig& scaling, double fp_tol = 1e-13);

std::pair<TimePeriodicTransonicSolution, IterationReport> run_iteration(
    const SteadyTransonicSolution& bg, const SupersonicPeriodicField& sup,
    const BoundaryForcing& forcing, const ScalingConfig& scaling,
    const IterationOptions& opts = {});

std::vector<ModulusRow> modulus_of_continuity(
    const PeriodicField& field, const std::vector<double>& deltas);

/// Extension width of the subsonic strip for a given forcing amplitude:
/// sqrt(eps) capped at min(x*, L-x*)/2 (and at the background extension).
double extension_width(const SteadyTransonicSolution& bg, double eps);

}  // namespace tpshock
