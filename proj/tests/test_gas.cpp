#include <cmath>
#include <random>

#include <doctest.h>

#include "tpshock/gas.hpp"

using namespace tpshock;

TEST_CASE("riemann invariants: direct values") {
  const RiemannPair a = to_riemann({1.0, 0.0});
  CHECK(a.y1 == 0.0);
  CHECK(a.y2 == 0.0);
  const RiemannPair b = to_riemann({std::exp(1.0), 2.0});
  CHECK(b.y1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b.y2 == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("riemann inversion: direct values") {
  const GasState a = from_riemann({0.0, 0.0});
  CHECK(a.rho == 1.0);
  CHECK(a.u == 0.0);
  const GasState b = from_riemann({1.0, 3.0});
  CHECK(b.rho == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(b.u == doctest::Approx(2.0).epsilon(1e-14));
  const GasState c = from_riemann({-1.0, 1.0});
  CHECK(c.rho == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(c.u == doctest::Approx(0.0));
}

TEST_CASE("round trip identities on random states") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> rho_d(0.1, 10.0);
  std::uniform_real_distribution<double> u_d(-5.0, 5.0);
  for (int k = 0; k < 10000; ++k) {
    const GasState s{rho_d(rng), u_d(rng)};
    const GasState back = from_riemann(to_riemann(s));
    CHECK(back.rho == doctest::Approx(s.rho).epsilon(1e-12));
    CHECK(back.u == doctest::Approx(s.u).epsilon(1e-12));
    const RiemannPair y{u_d(rng), u_d(rng)};
    const RiemannPair y2 = to_riemann(from_riemann(y));
    CHECK(y2.y1 == doctest::Approx(y.y1).epsilon(1e-12));
    CHECK(y2.y2 == doctest::Approx(y.y2).epsilon(1e-12));
  }
}

TEST_CASE("eigenvalues") {
  auto [l1, l2] = eigenvalues({1.0, 0.5});
  CHECK(l1 == -0.5);
  CHECK(l2 == 1.5);
  auto [m1, m2] = eigenvalues({1.0, 2.0});
  CHECK(m1 == 1.0);
  CHECK(m2 == 3.0);
  auto [s1, s2] = eigenvalues({1.0, 1.0});
  CHECK(s1 == 0.0);
  CHECK(s2 == 2.0);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u_d(0.01, 5.0);
  for (int k = 0; k < 100; ++k) {
    auto [a, b] = eigenvalues({1.0, u_d(rng)});
    CHECK(std::abs((b - a) - 2.0) <= 8e-16);  // exact up to one rounding each
  }
}

TEST_CASE("regime classification") {
  CHECK(classify({1.0, 2.0}, 1e-6) == Regime::Supersonic);
  CHECK(classify({1.0, 0.5}) == Regime::Subsonic);
  CHECK(classify({1.0, 1.0 + 1e-9}, 1e-6) == Regime::Sonic);
  CHECK_THROWS_AS(classify({1.0, 0.0}), NonPositiveVelocity);
  CHECK_THROWS_AS(classify({1.0, -0.3}), NonPositiveVelocity);

  // regime matches the characteristic-speed signs
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u_d(0.01, 3.0);
  for (int k = 0; k < 200; ++k) {
    const GasState s{1.0, u_d(rng)};
    const Regime r = classify(s, 1e-6);
    auto [l1, l2] = eigenvalues(s);
    if (r == Regime::Supersonic) CHECK(l1 > 0.0);
    if (r == Regime::Subsonic) {
      CHECK(l1 < 0.0);
      CHECK(l2 > 0.0);
    }
  }
}

TEST_CASE("invalid states rejected") {
  CHECK_THROWS_AS(to_riemann({-1.0, 0.5}), DomainViolation);
  CHECK_THROWS_AS(to_riemann({0.0, 0.5}), DomainViolation);
}
