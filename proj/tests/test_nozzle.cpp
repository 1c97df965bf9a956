#include <cmath>

#include <doctest.h>

#include "tpshock/nozzle.hpp"

using namespace tpshock;

TEST_CASE("exponential profile: constant relative slope") {
  const NozzleProfile p = NozzleProfile::exponential(0.05, 1.0);
  for (double x : {0.0, 0.3, 0.777, 1.0}) {
    CHECK(p.rel_slope(x) == 0.05);
    CHECK(p.rel_slope_prime(x) == 0.0);
  }
  CHECK(p.area(0.0) == 1.0);
  CHECK(p.area(1.0) == doctest::Approx(std::exp(0.05)).epsilon(1e-15));
}

TEST_CASE("polynomial profile: a = 1 + 0.05 x") {
  const NozzleProfile p = NozzleProfile::polynomial({1.0, 0.05}, 1.0);
  CHECK(p.rel_slope(0.0) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(p.rel_slope(1.0) == doctest::Approx(0.05 / 1.05).epsilon(1e-12));
  // (a'/a)' = -(a'/a)^2 for linear a
  CHECK(p.rel_slope_prime(0.0) == doctest::Approx(-0.0025).epsilon(1e-12));
}

TEST_CASE("domain checks") {
  const NozzleProfile p = NozzleProfile::exponential(0.05, 1.0);
  CHECK_THROWS_AS(p.rel_slope(1.5), OutOfDomain);
  CHECK_THROWS_AS(p.area(-0.2), OutOfDomain);
}

TEST_CASE("assumption validation on the reference configuration") {
  const NozzleProfile p = NozzleProfile::exponential(0.05, 1.0);
  const AssumptionReport r = validate_assumptions(p, {1.0, 2.0}, 256);
  CHECK(r.pass());
  CHECK(r.kappa == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(r.theta == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.slope_derivative_bound == 0.0);
  CHECK(r.divergent_ok);
  CHECK(r.inlet_velocity_ok);
}

TEST_CASE("assumption failures are reported, not thrown") {
  const NozzleProfile p = NozzleProfile::exponential(0.05, 1.0);
  const AssumptionReport too_fast = validate_assumptions(p, {1.0, 4.0}, 64);
  CHECK_FALSE(too_fast.pass());
  CHECK_FALSE(too_fast.inlet_velocity_ok);

  const AssumptionReport sonic_inlet = validate_assumptions(p, {1.0, 1.0}, 64);
  CHECK_FALSE(sonic_inlet.pass());
  CHECK_FALSE(sonic_inlet.inlet_velocity_ok);

  // constant-area duct is not divergent
  const NozzleProfile flat = NozzleProfile::polynomial({1.0}, 1.0);
  const AssumptionReport r = validate_assumptions(flat, {1.0, 2.0}, 64);
  CHECK_FALSE(r.pass());
  CHECK_FALSE(r.divergent_ok);

  // converging duct rejected the same way
  const NozzleProfile conv = NozzleProfile::polynomial({1.0, -0.05}, 1.0);
  CHECK_FALSE(validate_assumptions(conv, {1.0, 2.0}, 64).divergent_ok);
}

TEST_CASE("validation is deterministic and idempotent") {
  const NozzleProfile p = NozzleProfile::polynomial({1.0, 0.04, 0.01}, 2.0);
  const AssumptionReport a = validate_assumptions(p, {1.0, 1.8}, 128);
  const AssumptionReport b = validate_assumptions(p, {1.0, 1.8}, 128);
  CHECK(a.kappa == b.kappa);
  CHECK(a.theta == b.theta);
  CHECK(a.slope_derivative_bound == b.slope_derivative_bound);
  CHECK(a.pass() == b.pass());
}
