#pragma once

#include <optional>
#include <utility>

#include "tpshock/gas.hpp"
#include "tpshock/steady.hpp"

namespace tpshock {

/// Right state of a shock moving at speed v with the given left state:
/// rho_r = rho_l (u_l - v)^2, u_r = 1/(u_l - v) + v.
GasState rh_jump_moving(const GasState& left, double v);

/// Shock speed recovered from a compressive pair: v = u_l - sqrt(rho_r/rho_l).
double shock_speed_from_states(const GasState& left, const GasState& right);

/// Lax condition for this system: u_l - v > 1 and 0 < u_r - v < 1.
bool lax_admissible(const GasState& left, const GasState& right, double v);

/// Shock-boundary function G: the second Riemann invariant of the jumped
/// state measured against the steady value, as a function of shock position,
/// shock speed and the supersonic-side perturbations.
double eval_G(const SteadyTransonicSolution& bg, double x, double v,
              double rho_bar, double u_bar);

/// Shock-speed function F = u_l - sqrt(rho_r,*(x)/rho_l) e^{U/2}.
double eval_F(const SteadyTransonicSolution& bg, double x, double U,
              double rho_bar, double u_bar);

/// The eight partial derivatives of G and F at (x*, 0, 0, 0), closed form.
struct LinearizationCoeffs {
  double dG_dx = 0.0;
  double dG_dv = 0.0;
  double dG_drho = 0.0;
  double dG_du = 0.0;
  double dF_dx = 0.0;
  double dF_dU = 0.0;
  double dF_drho = 0.0;
  double dF_du = 0.0;
};

LinearizationCoeffs linearization(const SteadyTransonicSolution& bg);

/// Dissipation number and the derived scaling/contraction parameters.
struct ScalingConfig {
  double M = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double alpha_lo = 0.0;  // open interval (alpha_lo, 1)
  double beta_lo = 0.0;   // open interval (beta_lo, 1)
};

/// M = (u_inlet - 1)^2 / (2 u_inlet); alpha and beta default to interval
/// midpoints, both overridable; membership in the open intervals is enforced.
ScalingConfig scaling_config(const SteadyTransonicSolution& bg,
                             std::optional<double> alpha_override = {},
                             std::optional<double> beta_override = {});

std::pair<double, double> scale_phi(std::pair<double, double> phi,
                                    double alpha);
std::pair<double, double> unscale_phi(std::pair<double, double> phi_hat,
                                      double alpha);

}  // namespace tpshock
