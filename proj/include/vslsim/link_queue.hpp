#pragma once

#include "vslsim/flow.hpp"

namespace vsl {

// Zone density as a single ODE state, dk/dt = (f - g) / l0, with the shared
// boundary flux laws. Advanced by forward Euler; clamping to [0, k_j] is a
// counted safety net (it never fires for admissible step sizes).
class LinkQueuePlant {
 public:
  LinkQueuePlant(const FlowModel& model, double zone_length, double initial_density);

  struct Rates {
    double dk_dt;  // [veh/m/s]
    double f, g;   // boundary fluxes [veh/s]
  };
  Rates rhs(double u, double d_minus) const;

  struct Fluxes {
    double f, g;
  };
  Fluxes step(double u, double d_minus, double dt);

  double density() const { return k_; }
  double zone_length() const { return l0_; }
  double stored_vehicles() const { return k_ * l0_; }
  long clamp_events() const { return clamp_events_; }
  const FlowModel& model() const { return model_; }

 private:
  FlowModel model_;
  double l0_;
  double k_;
  long clamp_events_ = 0;
};

}  // namespace vsl
