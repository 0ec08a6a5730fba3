#include "kelab/cone_angle.hpp"

#include <cmath>
#include <string>

#include "kelab/errors.hpp"

namespace kelab {

ConeAngle::ConeAngle(double beta) : beta_(beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw DomainError("cone angle parameter must lie in (0, 1], got " + std::to_string(beta));
  }
}

RadialParam RadialParam::from_t(double t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw DomainError("radial parameter t must lie in (0, 1), got " + std::to_string(t));
  }
  return RadialParam(t, std::log(t));
}

RadialParam RadialParam::from_log(double log_t) {
  if (!(log_t < 0.0) || !std::isfinite(log_t)) {
    throw DomainError("log t must be negative, got " + std::to_string(log_t));
  }
  return RadialParam(std::exp(log_t), log_t);
}

}  // namespace kelab
