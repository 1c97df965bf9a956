#pragma once

#include <vector>

#include "tpshock/errors.hpp"
#include "tpshock/gas.hpp"

namespace tpshock {

/// Divergent-nozzle cross section. Only analytic families are supported so
/// that a'/a and (a'/a)' are available in closed form; the iteration's
/// convergence constants depend on a smooth relative slope.
class NozzleProfile {
 public:
  enum class Shape { Exponential, Polynomial };

  /// Default: unit-length constant-area duct (valid only as a placeholder).
  NozzleProfile() = default;

  static NozzleProfile exponential(double kappa, double length);
  /// a(x) = sum_k c[k] x^k; a > 0 is enforced on a fine grid at construction.
  static NozzleProfile polynomial(std::vector<double> coeffs, double length);

  double length() const { return length_; }
  Shape shape() const { return shape_; }
  double kappa_param() const { return kappa_; }
  const std::vector<double>& coefficients() const { return coeffs_; }

  double area(double x) const;
  double area_prime(double x) const;
  /// a'(x)/a(x)
  double rel_slope(double x) const;
  /// d/dx of a'(x)/a(x)
  double rel_slope_prime(double x) const;

 private:
  void check_domain(double x) const;

  Shape shape_ = Shape::Exponential;
  double length_ = 1.0;
  double kappa_ = 0.0;              // exponential only
  std::vector<double> coeffs_;      // polynomial only
};

/// Structural-assumption measurements for a profile + inlet pair.
struct AssumptionReport {
  double kappa = 0.0;                  // sup of a'/a on the grid
  double theta = 0.0;                  // inf(a'/a) / kappa
  double slope_derivative_bound = 0.0; // sup |(a'/a)'|, reported, no threshold
  bool divergent_ok = false;           // a'(x) > 0 at every grid point
  bool inlet_velocity_ok = false;      // 1 < u_inlet < 2 + sqrt(3)
  double inlet_velocity = 0.0;

  bool pass() const {
    return divergent_ok && inlet_velocity_ok && theta > 0.0 && theta <= 1.0;
  }
};

AssumptionReport validate_assumptions(const NozzleProfile& p,
                                      const GasState& inlet, int grid_n);

}  // namespace tpshock
