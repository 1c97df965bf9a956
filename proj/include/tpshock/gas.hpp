#pragma once

#include <utility>

#include "tpshock/errors.hpp"

namespace tpshock {

/// Default half-width of the sonic exclusion band around u = 1. The steady
/// ODE and the characteristic speeds degenerate at u = 1, so every solver in
/// this library refuses states inside the band instead of blowing up.
inline constexpr double kTolSonic = 1e-6;

/// Primitive state (density, velocity) of the isothermal gas, sound speed 1.
struct GasState {
  double rho = 1.0;
  double u = 0.0;
};

/// Riemann invariants y1 = u - ln(rho), y2 = u + ln(rho).
struct RiemannPair {
  double y1 = 0.0;
  double y2 = 0.0;
};

enum class Regime { Supersonic, Sonic, Subsonic };

RiemannPair to_riemann(const GasState& s);
GasState from_riemann(const RiemannPair& r);

/// Characteristic speeds (u - 1, u + 1).
std::pair<double, double> eigenvalues(const GasState& s);

/// Classifies against the sonic band; throws NonPositiveVelocity for u <= 0
/// (all flows handled here move left to right).
Regime classify(const GasState& s, double tol_sonic = kTolSonic);

const char* regime_name(Regime r);

}  // namespace tpshock
