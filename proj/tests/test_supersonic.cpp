#include <cmath>

#include <doctest.h>

#include "test_refs.hpp"
#include "tpshock/supersonic.hpp"

using namespace tpshock;

namespace {

double periodicity_defect(const SupersonicPeriodicField& f) {
  double d = 0.0;
  for (int j = 0; j <= f.rho_bar.nx; ++j) {
    d = std::max(d, std::abs(f.rho_bar.at(0, j) -
                             f.rho_bar.at(f.rho_bar.nt, j)));
    d = std::max(d, std::abs(f.u_bar.at(0, j) - f.u_bar.at(f.u_bar.nt, j)));
  }
  return d;
}

}  // namespace

TEST_CASE("forcing validation") {
  BoundaryForcing f = refs::exit_forcing(1e-3);
  CHECK(f.c1_bound >= 1e-3);            // the derivative dominates for sin
  CHECK(f.c1_bound <= 2 * M_PI * 1e-3 * 1.0001);
  CHECK(!f.has_left());

  BoundaryForcing bad;
  bad.period = 1.0;
  bad.rho_bar_l.f = [](double t) { return 0.01 * std::sin(t); };  // not 1-periodic
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("zero forcing reproduces the background exactly") {
  BoundaryForcing none;
  none.period = 1.0;
  none.amplitude = 0.0;
  none.validate();
  const auto f = solve_supersonic_periodic(refs::profile(), refs::background(),
                                           none, {128, 128});
  CHECK(f.rho_bar.max_abs() == 0.0);
  CHECK(f.u_bar.max_abs() == 0.0);
  CHECK(f.dt_rho_bar.max_abs() == 0.0);
  CHECK(periodicity_defect(f) <= 1e-10);
}

TEST_CASE("exit-only forcing leaves the supersonic region untouched") {
  const auto f = solve_supersonic_periodic(refs::profile(), refs::background(),
                                           refs::exit_forcing(1e-3),
                                           {128, 128});
  CHECK(f.rho_bar.max_abs() == 0.0);
  CHECK(f.u_bar.max_abs() == 0.0);
}

TEST_CASE("periodicity after the transient flush") {
  const auto f = solve_supersonic_periodic(refs::profile(), refs::background(),
                                           refs::inlet_forcing(1e-3),
                                           {256, 256});
  CHECK(periodicity_defect(f) < 1e-8);
  // inlet trace is matched exactly at x = 0
  const double T = 1.0;
  for (int i = 0; i <= 256; i += 16) {
    const double t = T * i / 256;
    const double expect = 1e-3 * std::sin(2 * M_PI * t / T);
    CHECK(f.rho_bar.at(i, 0) == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("linear response: gain stable under halving the amplitude") {
  const auto f1 = solve_supersonic_periodic(
      refs::profile(), refs::background(), refs::inlet_forcing(1e-3),
      {256, 256});
  const auto f2 = solve_supersonic_periodic(
      refs::profile(), refs::background(), refs::inlet_forcing(5e-4),
      {256, 256});
  CHECK(f1.measured_gain ==
        doctest::Approx(f2.measured_gain).epsilon(0.10));
  CHECK(f1.measured_gain > 0.0);
}

TEST_CASE("sampling the field") {
  const auto f = solve_supersonic_periodic(refs::profile(), refs::background(),
                                           refs::inlet_forcing(1e-3),
                                           {128, 128});
  const double T = 1.0;
  const double x_max = f.x_max();
  // grid node reproduces the stored value
  const int i = 37, j = 54;
  const double t = T * i / 128;
  const double x = x_max * j / 128;
  const ShockSideSample s = sample_forcing_at_shock(f, t, x);
  CHECK(s.rho_bar == doctest::Approx(f.rho_bar.at(i, j)).epsilon(1e-12));
  CHECK(s.u_bar == doctest::Approx(f.u_bar.at(i, j)).epsilon(1e-12));
  CHECK_THROWS_AS(sample_forcing_at_shock(f, 0.1, x_max + 0.2), OutOfDomain);
}

TEST_CASE("interpolation error shrinks under refinement") {
  const auto coarse = solve_supersonic_periodic(
      refs::profile(), refs::background(), refs::inlet_forcing(1e-3),
      {256, 256});
  const auto fine = solve_supersonic_periodic(
      refs::profile(), refs::background(), refs::inlet_forcing(1e-3),
      {512, 512});
  double dev = 0.0;
  for (int i = 0; i <= 16; ++i) {
    for (int j = 0; j <= 16; ++j) {
      const double t = 1.0 * i / 16 + 0.013;
      const double x = coarse.x_max() * j / 16 * 0.99;
      const ShockSideSample a = sample_forcing_at_shock(coarse, t, x);
      const ShockSideSample b = sample_forcing_at_shock(fine, t, x);
      dev = std::max({dev, std::abs(a.rho_bar - b.rho_bar),
                      std::abs(a.u_bar - b.u_bar)});
    }
  }
  CHECK(dev < 1e-6);
}

TEST_CASE("amplitude limits") {
  BoundaryForcing huge;
  huge.period = 1.0;
  huge.amplitude = 1.5;
  huge.u_bar_l.f = [](double t) { return -1.5 * std::sin(2 * M_PI * t); };
  huge.u_bar_l.df = [](double t) {
    return -1.5 * 2 * M_PI * std::cos(2 * M_PI * t);
  };
  huge.validate();
  CHECK_THROWS_AS(
      solve_supersonic_periodic(refs::profile(), refs::background(), huge,
                                {64, 64}),
      AmplitudeTooLarge);
}
