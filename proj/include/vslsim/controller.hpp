#pragma once

#include "vslsim/flow.hpp"

namespace vsl {

// Speed-limit policy: no control, a constant open-loop limit, or the
// incremental PI family acting on the observed density. The increment form
//   u <- clamp(u - alpha (k_new - k_prev) + beta (k_target - k_prev) dt)
// carries the integral inside u itself, so clamping doubles as anti-windup.
struct ControllerConfig {
  enum class Kind { None, Constant, Pi };

  Kind kind = Kind::None;
  double u_const = 0.0;  // Constant kind
  double alpha = 0.0;    // proportional gain [(m/s)/(veh/m)]
  double beta = 0.0;     // integral gain [(m/s)/(veh/m s)]
  double u_min = 0.0;    // [m/s]
  double xi = 0.0;       // target density bias: k_target = (1 + xi) k_1

  void validate(const FlowModel& model) const;
  double target_density(const FlowModel& model) const {
    return (1.0 + xi) * model.constants().k_1;
  }
};

struct ControllerState {
  double u = 0.0;       // current speed limit, always within [u_min, v_f]
  double k_prev = 0.0;  // density observed at the previous update
};

ControllerState controller_init(const ControllerConfig& config, const FlowModel& model,
                                double initial_observation);

ControllerState controller_update(const ControllerConfig& config, const FlowModel& model,
                                  const ControllerState& state, double k_obs_new,
                                  double dt);

}  // namespace vsl
