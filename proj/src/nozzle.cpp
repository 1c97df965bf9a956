#include "tpshock/nozzle.hpp"

#include <cmath>
#include <string>

namespace tpshock {

NozzleProfile NozzleProfile::exponential(double kappa, double length) {
  if (!(length > 0.0)) throw ConfigError("nozzle length must be positive");
  if (!std::isfinite(kappa)) throw ConfigError("kappa must be finite");
  NozzleProfile p;
  p.shape_ = Shape::Exponential;
  p.length_ = length;
  p.kappa_ = kappa;
  return p;
}

NozzleProfile NozzleProfile::polynomial(std::vector<double> coeffs,
                                        double length) {
  if (!(length > 0.0)) throw ConfigError("nozzle length must be positive");
  if (coeffs.empty()) throw ConfigError("polynomial needs coefficients");
  NozzleProfile p;
  p.shape_ = Shape::Polynomial;
  p.length_ = length;
  p.coeffs_ = std::move(coeffs);
  const int n = 512;
  for (int i = 0; i <= n; ++i) {
    const double x = length * i / n;
    if (!(p.area(x) > 0.0)) {
      throw ConfigError("polynomial area non-positive at x=" +
                        std::to_string(x));
    }
  }
  return p;
}

void NozzleProfile::check_domain(double x) const {
  if (x < -1e-12 || x > length_ + 1e-12) {
    throw OutOfDomain("x=" + std::to_string(x) + " outside [0," +
                      std::to_string(length_) + "]");
  }
}

double NozzleProfile::area(double x) const {
  check_domain(x);
  if (shape_ == Shape::Exponential) return std::exp(kappa_ * x);
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * x + *it;
  return v;
}

double NozzleProfile::area_prime(double x) const {
  check_domain(x);
  if (shape_ == Shape::Exponential) return kappa_ * std::exp(kappa_ * x);
  double v = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 1;) {
    v = v * x + static_cast<double>(k) * coeffs_[k];
  }
  return v;
}

double NozzleProfile::rel_slope(double x) const {
  if (shape_ == Shape::Exponential) {
    check_domain(x);
    return kappa_;
  }
  return area_prime(x) / area(x);
}

double NozzleProfile::rel_slope_prime(double x) const {
  check_domain(x);
  if (shape_ == Shape::Exponential) return 0.0;
  // (a'/a)' = a''/a - (a'/a)^2
  double app = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 2;) {
    app = app * x + static_cast<double>(k * (k - 1)) * coeffs_[k];
  }
  const double s = rel_slope(x);
  return app / area(x) - s * s;
}

AssumptionReport validate_assumptions(const NozzleProfile& p,
                                      const GasState& inlet, int grid_n) {
  if (grid_n < 2) throw ConfigError("grid_n must be >= 2");
  AssumptionReport rep;
  double slope_min = 0.0;
  double slope_max = 0.0;
  rep.divergent_ok = true;
  for (int i = 0; i <= grid_n; ++i) {
    const double x = p.length() * i / grid_n;
    const double s = p.rel_slope(x);
    const double sp = std::abs(p.rel_slope_prime(x));
    if (i == 0) {
      slope_min = slope_max = s;
    } else {
      slope_min = std::min(slope_min, s);
      slope_max = std::max(slope_max, s);
    }
    rep.slope_derivative_bound = std::max(rep.slope_derivative_bound, sp);
    if (!(p.area_prime(x) > 0.0)) rep.divergent_ok = false;
  }
  rep.kappa = slope_max;
  rep.theta = slope_max > 0.0 ? slope_min / slope_max : 0.0;
  rep.inlet_velocity = inlet.u;
  rep.inlet_velocity_ok = inlet.u > 1.0 && inlet.u < 2.0 + std::sqrt(3.0);
  return rep;
}

}  // namespace tpshock
