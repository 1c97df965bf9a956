#pragma once

#include <optional>
#include <vector>

#include "tpshock/subsonic.hpp"

namespace tpshock {

/// Piecewise-smooth initial data for the tracked evolution: primitive states
/// on two fixed grids that extend smoothly past the initial shock position.
struct PiecewiseInitialData {
  double shock_position = 0.0;
  std::vector<double> left_x;
  std::vector<GasState> left_states;
  std::vector<double> right_x;
  std::vector<GasState> right_states;
  /// Measured C0 distance of the data to the steady background.
  double perturbation_size = 0.0;
};

/// Steady background with the shock displaced by `offset`; fields unchanged.
PiecewiseInitialData init_from_steady(const SteadyTransonicSolution& bg,
                                      double offset, int nx_left,
                                      int nx_right, double x_lo_right);

/// Snapshot of the time-periodic solution at t = 0, with an optional shock
/// displacement and an optional smooth bump added to the subsonic side.
PiecewiseInitialData init_from_periodic(
    const TimePeriodicTransonicSolution& periodic, double offset,
    double bump_amplitude, int nx_left, int nx_right);

struct IbvpOptions {
  double cfl = 0.45;
  int metrics_stride = 2;    // distance metrics sampled every k-th step
  int check_stride = 16;     // admissibility checks
  double tol_sonic = kTolSonic;
};

/// Scalar series sampled along the tracked run.
struct TrackedTrajectory {
  std::vector<double> t;
  std::vector<double> gamma;
  std::vector<double> gamma_dot;
  // present when a reference periodic solution was supplied
  std::vector<double> metric_t;
  std::vector<double> theta;           // scaled-invariant distance, subsonic
  std::vector<double> supersonic_gap;  // primitive distance, supersonic
  std::vector<double> prim_gap_sub;    // primitive distance, subsonic
  std::vector<double> shock_gap;       // |gamma - gamma^ref|
  std::vector<double> shock_dot_gap;
  std::vector<double> mass_residual;   // discrete mass-balance defect
  bool has_reference = false;

  // final fields, for self-consistency tests
  std::vector<double> left_x, right_x;
  std::vector<GasState> left_final, right_final;
  double t_end = 0.0;
};

struct StabilityReport {
  double T0 = 0.0;
  std::vector<double> window_theta_max;
  std::vector<double> window_factors;   // ratio of consecutive window maxima
  std::vector<double> window_shock_gap_max;
  double xi_fit = 0.0;
  bool xi_fit_defined = false;
  /// max{exp(-(a'/a)(x*) u_l,*(x*)/2 T0), M(1+alpha)/(2 alpha)}; the
  /// order-epsilon correction of the theory is dropped.
  double xi_theory = 0.0;
  double theta_peak = 0.0;
};

/// Front-tracking evolution of the perturbed initial data; when `reference`
/// is given, distance metrics against it are recorded along the way.
TrackedTrajectory solve_ibvp(const SteadyTransonicSolution& bg,
                             const BoundaryForcing& forcing,
                             const ScalingConfig& scaling,
                             const PiecewiseInitialData& init, double t_end,
                             const IbvpOptions& opts = {},
                             const TimePeriodicTransonicSolution* reference =
                                 nullptr);

StabilityReport measure_decay(const TrackedTrajectory& traj,
                              const TimePeriodicTransonicSolution& periodic);

double compute_T0(const TimePeriodicTransonicSolution& periodic,
                  double tol_sonic = kTolSonic);
/// Same formula on a raw velocity sample (used by tests and toy cases).
double compute_T0_from_velocities(const std::vector<double>& u, double L,
                                  double tol_sonic = kTolSonic);

}  // namespace tpshock
