#include "vslsim/demand.hpp"

#include <algorithm>
#include <string>

#include "vslsim/errors.hpp"

namespace vsl {

double trapezoid_rate(const ArrivalPattern& pattern, double t) {
  const double shape = std::min({1.0, pattern.ramp_rate * t,
                                 1.0 - pattern.ramp_rate * (t - pattern.fall_start)});
  return std::max(0.0, pattern.peak * shape);
}

double arrival_rate(const ArrivalPattern& pattern, double t, Rng& rng) {
  if (pattern.kind == ArrivalPattern::Kind::Constant) return pattern.value;
  const double shape = std::min({1.0, pattern.ramp_rate * t,
                                 1.0 - pattern.ramp_rate * (t - pattern.fall_start)});
  return std::max(0.0, pattern.peak * shape + pattern.noise_std * rng.next_normal());
}

double PointQueue::demand(double r, double dt, double cap) const {
  return std::min(cap, lambda_ / dt + r);
}

void PointQueue::step(double r, double f, double dt) {
  lambda_ += dt * (r - f);
  if (lambda_ < 0.0) {
    if (lambda_ < -1e-12) {
      throw InvariantError("point queue went negative (" + std::to_string(lambda_) +
                           " veh): in-flux exceeded the issued demand");
    }
    lambda_ = 0.0;
  }
}

}  // namespace vsl
