#include "vslsim/link_queue.hpp"

namespace vsl {

LinkQueuePlant::LinkQueuePlant(const FlowModel& model, double zone_length,
                               double initial_density)
    : model_(model), l0_(zone_length) {
  if (!(l0_ > 0.0)) throw ConfigError("zone length must be positive");
  k_ = model_.fd().checked_density(initial_density);
}

LinkQueuePlant::Rates LinkQueuePlant::rhs(double u, double d_minus) const {
  const double f = model_.inflow_flux(d_minus, u, k_);
  const double g = model_.discharge_flux(k_);
  return {(f - g) / l0_, f, g};
}

LinkQueuePlant::Fluxes LinkQueuePlant::step(double u, double d_minus, double dt) {
  const Rates r = rhs(u, d_minus);
  double k_new = k_ + dt * r.dk_dt;
  if (k_new < 0.0) {
    k_new = 0.0;
    ++clamp_events_;
  } else if (k_new > model_.fd().k_j()) {
    k_new = model_.fd().k_j();
    ++clamp_events_;
  }
  k_ = k_new;
  return {r.f, r.g};
}

}  // namespace vsl
