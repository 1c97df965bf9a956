#include <cmath>
#include <memory>

#include <doctest.h>

#include "test_refs.hpp"
#include "tpshock/stability.hpp"

using namespace tpshock;

namespace {

// Periodic solution at moderate resolution, shared by the suite.
const TimePeriodicTransonicSolution& periodic_ref() {
  static const auto sol = [] {
    IterationOptions opts;
    opts.nt = 256;
    opts.nx = 256;
    SupersonicPeriodicField sup;
    sup.eps = 0.0;
    auto pair = run_iteration(refs::background(), sup,
                              refs::exit_forcing(1e-3), refs::scaling(), opts);
    return std::make_unique<TimePeriodicTransonicSolution>(
        std::move(pair.first));
  }();
  return *sol;
}

}  // namespace

TEST_CASE("T0 formula") {
  CHECK(compute_T0_from_velocities({0.5, 0.5, 0.5}, 1.0) == 2.0);
  CHECK(compute_T0_from_velocities({0.5, 0.5}, 2.0) == 4.0);
  // inf |u - 1| attained at u = 0.5 on [0.45, 0.5]
  CHECK(compute_T0_from_velocities({0.45, 0.47, 0.5}, 1.0) ==
        doctest::Approx(2.0));
  // slower subsonic flow sits further from sonic: smaller T0
  CHECK(compute_T0_from_velocities({0.4, 0.4}, 1.0) <
        compute_T0_from_velocities({0.5, 0.5}, 1.0));
  CHECK_THROWS_AS(compute_T0_from_velocities({1.0 + 1e-9}, 1.0),
                  SonicBreakdown);

  const double T0 = compute_T0(periodic_ref());
  CHECK(T0 > 1.8);
  CHECK(T0 < 2.1);
}

TEST_CASE("displaced shock relaxes back with zero forcing") {
  const auto& bg = refs::background();
  BoundaryForcing none;
  none.period = 1.0;
  none.amplitude = 0.0;
  none.validate();
  const double x_lo = bg.x_star - extension_width(bg, 1e-3);
  const PiecewiseInitialData init = init_from_steady(bg, 0.01, 512, 1024, x_lo);
  CHECK(init.perturbation_size == doctest::Approx(0.01));

  const TrackedTrajectory traj =
      solve_ibvp(bg, none, refs::scaling(), init, 8.0);
  // monotone relaxation toward x*, sampled coarsely
  const std::size_t n = traj.gamma.size();
  double prev = traj.gamma.front();
  for (std::size_t k = n / 16; k < n; k += n / 16) {
    CHECK(traj.gamma[k] <= prev + 1e-12);
    prev = traj.gamma[k];
  }
  CHECK(std::abs(traj.gamma.back() - bg.x_star) <
        0.7 * std::abs(traj.gamma.front() - bg.x_star));
}

TEST_CASE("evolving the periodic solution reproduces it") {
  const auto& per = periodic_ref();
  const auto& bg = per.background;
  const PiecewiseInitialData init = init_from_periodic(per, 0.0, 0.0, 1024, 2048);
  const TrackedTrajectory traj = solve_ibvp(bg, per.forcing, per.scaling, init,
                                            1.0, {}, &per);
  double theta_max = 0.0;
  for (double th : traj.theta) theta_max = std::max(theta_max, th);
  CHECK(theta_max < 5e-6);
  double gap_max = 0.0;
  for (double g : traj.shock_gap) gap_max = std::max(gap_max, g);
  CHECK(gap_max < 5e-6);

  // discrete mass balance holds to first order at every checkpoint
  const double dx_right = traj.right_x[1] - traj.right_x[0];
  for (double r : traj.mass_residual) CHECK(r < 100.0 * dx_right);
}

TEST_CASE("measure_decay: sampled periodic trajectory is flagged trivial") {
  const auto& per = periodic_ref();
  // synthesize a trajectory that IS the periodic solution (no evolution)
  TrackedTrajectory traj;
  traj.has_reference = true;
  traj.t_end = 8.0;
  const double T0 = compute_T0(per);
  REQUIRE(traj.t_end >= 3 * T0);
  for (int k = 0; k <= 400; ++k) {
    const double t = traj.t_end * k / 400;
    traj.metric_t.push_back(t);
    traj.theta.push_back(0.0);
    traj.shock_gap.push_back(0.0);
  }
  const StabilityReport rep = measure_decay(traj, per);
  CHECK_FALSE(rep.xi_fit_defined);
  CHECK(rep.theta_peak == 0.0);
  CHECK(rep.xi_theory > 0.0);
  CHECK(rep.xi_theory < 1.0);
}

TEST_CASE("measure_decay needs a long enough horizon") {
  const auto& per = periodic_ref();
  TrackedTrajectory traj;
  traj.has_reference = true;
  traj.t_end = 1.0;
  CHECK_THROWS_AS(measure_decay(traj, per), WindowTooShort);
}

TEST_CASE("displaced shock with forcing decays toward the periodic orbit") {
  const auto& per = periodic_ref();
  const auto& bg = per.background;
  const double T0 = compute_T0(per);
  const PiecewiseInitialData init = init_from_periodic(per, 0.005, 0.0, 512, 1024);
  const TrackedTrajectory traj = solve_ibvp(bg, per.forcing, per.scaling, init,
                                            5.2 * T0, {}, &per);
  const StabilityReport rep = measure_decay(traj, per);
  REQUIRE(rep.window_factors.size() >= 4);
  for (std::size_t w = 1; w < rep.window_factors.size(); ++w) {
    CHECK(rep.window_factors[w] < 1.0);
  }
  CHECK(rep.xi_fit_defined);
  CHECK(rep.xi_fit < 1.0);
  // the shock gap itself contracts window over window
  const auto& sg = rep.window_shock_gap_max;
  CHECK(sg.back() < sg.front());
}

TEST_CASE("initial data must be admissible") {
  const auto& bg = refs::background();
  const double x_lo = bg.x_star - extension_width(bg, 1e-3);
  // a forward-displaced shock stays admissible; build an inadmissible pair
  // by swapping the branches around the nominal position
  PiecewiseInitialData bad = init_from_steady(bg, 0.0, 128, 256, x_lo);
  for (auto& s : bad.right_states) s = {0.5, 2.2};  // supersonic on the right
  BoundaryForcing none;
  none.period = 1.0;
  none.amplitude = 0.0;
  none.validate();
  CHECK_THROWS_AS(solve_ibvp(bg, none, refs::scaling(), bad, 0.5),
                  AdmissibilityLost);
}
