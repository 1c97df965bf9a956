#include "tpshock/gas.hpp"

#include <cmath>

namespace tpshock {

namespace {
void check_valid(const GasState& s) {
  if (!(s.rho > 0.0) || !std::isfinite(s.rho) || !std::isfinite(s.u)) {
    throw DomainViolation("invalid gas state: rho=" + std::to_string(s.rho) +
                          " u=" + std::to_string(s.u));
  }
}
}  // namespace

RiemannPair to_riemann(const GasState& s) {
  check_valid(s);
  const double lr = std::log(s.rho);
  return {s.u - lr, s.u + lr};
}

GasState from_riemann(const RiemannPair& r) {
  if (!std::isfinite(r.y1) || !std::isfinite(r.y2)) {
    throw DomainViolation("non-finite Riemann pair");
  }
  return {std::exp(0.5 * (r.y2 - r.y1)), 0.5 * (r.y1 + r.y2)};
}

std::pair<double, double> eigenvalues(const GasState& s) {
  check_valid(s);
  return {s.u - 1.0, s.u + 1.0};
}

Regime classify(const GasState& s, double tol_sonic) {
  check_valid(s);
  if (s.u <= 0.0) {
    throw NonPositiveVelocity("velocity must be positive, got u=" +
                              std::to_string(s.u));
  }
  if (s.u > 1.0 + tol_sonic) return Regime::Supersonic;
  if (s.u < 1.0 - tol_sonic) return Regime::Subsonic;
  return Regime::Sonic;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Supersonic: return "supersonic";
    case Regime::Sonic: return "sonic";
    case Regime::Subsonic: return "subsonic";
  }
  return "?";
}

}  // namespace tpshock
