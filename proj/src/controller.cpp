#include "vslsim/controller.hpp"

#include <algorithm>

namespace vsl {

void ControllerConfig::validate(const FlowModel& model) const {
  if (!(u_min >= 0.0)) throw ConfigError("controller u_min must be non-negative");
  if (!(u_min < model.constants().v_2)) {
    throw ConfigError("controller u_min must be below v_2");
  }
  switch (kind) {
    case Kind::None:
      break;
    case Kind::Constant:
      if (u_const < u_min || u_const > model.fd().v_f()) {
        throw ConfigError("constant speed limit must lie in [u_min, v_f]");
      }
      break;
    case Kind::Pi:
      if (alpha < 0.0 || beta < 0.0 || alpha + beta <= 0.0) {
        throw ConfigError("PI gains must be non-negative with alpha + beta > 0");
      }
      break;
  }
  const double target = target_density(model);
  if (!(target > 0.0 && target < model.fd().k_j())) {
    throw ConfigError("target density (1 + xi) k_1 must lie inside (0, k_j)");
  }
}

ControllerState controller_init(const ControllerConfig& config, const FlowModel& model,
                                double initial_observation) {
  config.validate(model);
  const double u0 =
      config.kind == ControllerConfig::Kind::Constant ? config.u_const : model.fd().v_f();
  return {u0, initial_observation};
}

ControllerState controller_update(const ControllerConfig& config, const FlowModel& model,
                                  const ControllerState& state, double k_obs_new,
                                  double dt) {
  if (config.kind != ControllerConfig::Kind::Pi) return state;
  const double target = config.target_density(model);
  double u = state.u - config.alpha * (k_obs_new - state.k_prev) +
             config.beta * (target - state.k_prev) * dt;
  u = std::clamp(u, config.u_min, model.fd().v_f());
  return {u, k_obs_new};
}

}  // namespace vsl
