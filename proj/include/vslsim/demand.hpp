#pragma once

#include <cstdint>

#include "vslsim/rng.hpp"

namespace vsl {

// Upstream arrival pattern: either a constant rate or a ramp/plateau/ramp
// trapezoid with i.i.d. Gaussian noise added each step and clipped at zero.
struct ArrivalPattern {
  enum class Kind { Constant, TrapezoidNoise };

  Kind kind = Kind::Constant;
  double value = 0.0;  // Constant rate [veh/s]

  // TrapezoidNoise parameters.
  double peak = 0.0;          // plateau height [veh/s]
  double ramp_rate = 5e-4;    // fraction of peak gained/lost per second on the ramps
  double fall_start = 4000.0; // time the down-ramp begins [s]
  double horizon = 8000.0;    // [s]
  double noise_std = 0.0;     // standard deviation of the additive noise [veh/s]
  std::uint64_t seed = 1;
};

// Noise-free trapezoid value at time t (zero outside the trapezoid support).
double trapezoid_rate(const ArrivalPattern& pattern, double t);

// Realized arrival rate; draws exactly one normal per call for the noisy kind.
double arrival_rate(const ArrivalPattern& pattern, double t, Rng& rng);

// Vertical queue of vehicles that have arrived but not yet entered the zone.
// Step ordering contract per time step: demand() first, then the plant
// computes its in-flux f <= that demand, then step(r, f, dt).
class PointQueue {
 public:
  // Flow the queue plus fresh arrivals can offer this step, capped.
  double demand(double r, double dt, double cap) const;

  void step(double r, double f, double dt);

  double size() const { return lambda_; }

 private:
  double lambda_ = 0.0;  // [veh], never negative
};

}  // namespace vsl
