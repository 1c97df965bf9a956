#include "tpshock/shock_algebra.hpp"

#include <cmath>
#include <string>

namespace tpshock {

GasState rh_jump_moving(const GasState& left, double v) {
  const double w = left.u - v;
  if (!(w > 1e-12)) {
    throw InvalidRelativeVelocity("u_l - v must be positive, got " +
                                  std::to_string(w));
  }
  return {left.rho * w * w, 1.0 / w + v};
}

double shock_speed_from_states(const GasState& left, const GasState& right) {
  if (!(right.rho > left.rho)) {
    throw NotCompressive("need rho_r > rho_l, got rho_l=" +
                         std::to_string(left.rho) + " rho_r=" +
                         std::to_string(right.rho));
  }
  return left.u - std::sqrt(right.rho / left.rho);
}

bool lax_admissible(const GasState& left, const GasState& right, double v) {
  const double wl = left.u - v;
  const double wr = right.u - v;
  return wl > 1.0 && wr > 0.0 && wr < 1.0;
}

double eval_G(const SteadyTransonicSolution& bg, double x, double v,
              double rho_bar, double u_bar) {
  if (!bg.supersonic.contains(x)) {
    throw DomainViolation("eval_G: x outside the supersonic extended domain");
  }
  const GasState base = bg.supersonic.state(x);
  const double w = base.u + u_bar - v;
  const double rho_l = base.rho + rho_bar;
  if (!(w > 0.0) || !(rho_l > 0.0)) {
    throw DomainViolation("eval_G: relative velocity or density non-positive");
  }
  return 1.0 / w + v - 1.0 / base.u +
         std::log(rho_l * w * w / (base.rho * base.u * base.u));
}

double eval_F(const SteadyTransonicSolution& bg, double x, double U,
              double rho_bar, double u_bar) {
  if (!bg.supersonic.contains(x) || !bg.subsonic.contains(x)) {
    throw DomainViolation("eval_F: x outside both extended domains");
  }
  const GasState left = bg.supersonic.state(x);
  const GasState right = bg.subsonic.state(x);
  const double rho_l = left.rho + rho_bar;
  if (!(rho_l > 0.0)) throw DomainViolation("eval_F: density non-positive");
  return left.u + u_bar - std::sqrt(right.rho / rho_l) * std::exp(0.5 * U);
}

LinearizationCoeffs linearization(const SteadyTransonicSolution& bg) {
  const GasState l = bg.supersonic.state(bg.x_star);
  const double u = l.u;
  const double rho = l.rho;
  const double slope = bg.profile.rel_slope(bg.x_star);
  LinearizationCoeffs c;
  c.dG_dx = 0.0;
  c.dG_dv = (u - 1.0) * (u - 1.0) / (u * u);
  c.dG_drho = 1.0 / rho;
  c.dG_du = (2.0 * u - 1.0) / (u * u);
  c.dF_dx = -0.5 * slope * u;
  c.dF_dU = -0.5 * u;
  c.dF_drho = 0.5 * u / rho;
  c.dF_du = 1.0;
  return c;
}

ScalingConfig scaling_config(const SteadyTransonicSolution& bg,
                             std::optional<double> alpha_override,
                             std::optional<double> beta_override) {
  const double u0 = bg.inlet.u;
  ScalingConfig s;
  s.M = (u0 - 1.0) * (u0 - 1.0) / (2.0 * u0);
  if (s.M >= 1.0) {
    throw DissipationTooWeak("dissipation number M=" + std::to_string(s.M) +
                             " >= 1; inlet velocity outside (1, 2+sqrt(3))");
  }
  s.alpha_lo = s.M / (2.0 - s.M);
  s.alpha = alpha_override ? *alpha_override : 0.5 * (s.alpha_lo + 1.0);
  if (!(s.alpha > s.alpha_lo && s.alpha < 1.0)) {
    throw ConfigError("alpha=" + std::to_string(s.alpha) +
                      " outside (" + std::to_string(s.alpha_lo) + ",1)");
  }
  s.beta_lo = std::max((1.0 + s.alpha) / (2.0 * s.alpha) * s.M, s.alpha);
  s.beta = beta_override ? *beta_override : 0.5 * (s.beta_lo + 1.0);
  if (!(s.beta > s.beta_lo && s.beta < 1.0)) {
    throw ConfigError("beta=" + std::to_string(s.beta) + " outside (" +
                      std::to_string(s.beta_lo) + ",1)");
  }
  return s;
}

std::pair<double, double> scale_phi(std::pair<double, double> phi,
                                    double alpha) {
  return {phi.first, phi.second / alpha};
}

std::pair<double, double> unscale_phi(std::pair<double, double> phi_hat,
                                      double alpha) {
  return {phi_hat.first, phi_hat.second * alpha};
}

}  // namespace tpshock
