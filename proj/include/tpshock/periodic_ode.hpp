#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "tpshock/errors.hpp"

namespace tpshock {

/// Scalar dissipative ODE psi' = Xi(psi, w1(t,psi), w2(t,psi), w3(t,psi))
/// with T-periodic forcings. The caller supplies the partials of Xi at the
/// origin (they exist in closed form for every use in this library).
struct ForcedScalarODE {
  std::function<double(double psi, double w1, double w2, double w3)> xi;
  double dxi_dpsi0 = -1.0;                 // must be negative
  std::array<double, 3> dxi_domega0{0.0, 0.0, 0.0};
  /// Unset entries are treated as identically zero.
  std::array<std::function<double(double t, double psi)>, 3> omega;
  double period = 1.0;
};

struct PeriodicOrbit {
  std::vector<double> t;
  std::vector<double> psi;
  std::vector<double> psi_dot;
  std::vector<double> psi_ddot;
  double sigma_star = 0.0;
  double poincare_derivative = 0.0;  // measured at the fixed point
  int iterations = 0;

  double sup_psi() const;
  double sup_psi_dot() const;
  double sup_psi_ddot() const;
};

struct PeriodicOdeOptions {
  double fp_tol = 1e-12;
  int max_iter = 100;
  int n_steps = 4096;     // RK4 steps per period
  int n_out = 512;        // orbit samples stored over [0, T]
  double bracket_safety = 1.5;
  /// Starting point for the fixed-point iteration (default 0); the orbit is
  /// unique, so any point of the bracket converges to the same fixed point.
  std::optional<double> x0_hint;
};

/// RK4 value of the flow psi~(tau; t0, x0) of the forced ODE.
double stream(const ForcedScalarODE& ode, double t0, double x0, double tau,
              int n_steps);

/// Self-mapped bracket radius for the Poincare fixed point; verified by
/// flowing both endpoints over one period. Zero forcing gives zero.
double bracket_radius(const ForcedScalarODE& ode,
                      const PeriodicOdeOptions& opts = {});

PeriodicOrbit find_periodic(const ForcedScalarODE& ode,
                            const PeriodicOdeOptions& opts = {});

struct EstimateReport {
  double norm_psi = 0.0, bound_psi = 0.0;
  double norm_psi_dot = 0.0, bound_psi_dot = 0.0;
  double norm_psi_ddot = 0.0, bound_psi_ddot = 0.0;
  bool pass_psi = false, pass_psi_dot = false, pass_psi_ddot = false;
  bool pass() const { return pass_psi && pass_psi_dot && pass_psi_ddot; }
};

/// Checks the orbit norms against the dissipative bounds with the given
/// slack standing in for the non-constructive C_Xi*eps factor.
EstimateReport verify_estimates(const PeriodicOrbit& orbit,
                                const ForcedScalarODE& ode,
                                double slack = 0.25);

struct ComparisonReport {
  double diff_psi = 0.0, bound_psi = 0.0;
  double diff_psi_dot = 0.0, bound_psi_dot = 0.0;
  bool pass_psi = false, pass_psi_dot = false;
  bool pass() const { return pass_psi && pass_psi_dot; }
};

/// Distance of the periodic orbits of two forcings of the same Xi and T
/// against the Gronwall-type bounds.
ComparisonReport compare_periodic(const ForcedScalarODE& ode1,
                                  const ForcedScalarODE& ode2,
                                  double slack = 0.25,
                                  const PeriodicOdeOptions& opts = {});

}  // namespace tpshock
