#pragma once

#include <stdexcept>
#include <string>

namespace tpshock {

/// Base class for all solver/validation failures raised by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define TPSHOCK_DEFINE_ERROR(Name)                          \
  struct Name : Error {                                     \
    explicit Name(const std::string& msg) : Error(msg) {}   \
  }

TPSHOCK_DEFINE_ERROR(NonPositiveVelocity);
TPSHOCK_DEFINE_ERROR(OutOfDomain);
TPSHOCK_DEFINE_ERROR(SonicApproach);
TPSHOCK_DEFINE_ERROR(StepCountTooSmall);
TPSHOCK_DEFINE_ERROR(NonMonotoneResidual);
TPSHOCK_DEFINE_ERROR(InvalidRelativeVelocity);
TPSHOCK_DEFINE_ERROR(NotCompressive);
TPSHOCK_DEFINE_ERROR(DomainViolation);
TPSHOCK_DEFINE_ERROR(DissipationTooWeak);
TPSHOCK_DEFINE_ERROR(BracketEscape);
TPSHOCK_DEFINE_ERROR(NoConvergence);
TPSHOCK_DEFINE_ERROR(SonicBreakdown);
TPSHOCK_DEFINE_ERROR(AmplitudeTooLarge);
TPSHOCK_DEFINE_ERROR(VacuumAtExit);
TPSHOCK_DEFINE_ERROR(CharacteristicEscape);
TPSHOCK_DEFINE_ERROR(ShockLeftDomain);
TPSHOCK_DEFINE_ERROR(NoContraction);
TPSHOCK_DEFINE_ERROR(ShockExitsDomain);
TPSHOCK_DEFINE_ERROR(AdmissibilityLost);
TPSHOCK_DEFINE_ERROR(WindowTooShort);
TPSHOCK_DEFINE_ERROR(NoShockFound);
TPSHOCK_DEFINE_ERROR(PositivityLoss);
TPSHOCK_DEFINE_ERROR(ConfigError);

/// Exit density target outside the attainable range; carries the probed interval.
struct ExitDensityUnattainable : Error {
  double attainable_lo;
  double attainable_hi;
  ExitDensityUnattainable(const std::string& msg, double lo, double hi)
      : Error(msg), attainable_lo(lo), attainable_hi(hi) {}
};

#undef TPSHOCK_DEFINE_ERROR

}  // namespace tpshock
