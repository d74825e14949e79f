#pragma once

#include <vector>

#include "vslsim/flow.hpp"

namespace vsl {

// Godunov discretization of the kinematic wave model on n equal cells with
// the shared boundary flux laws: the speed-limit cap at the inlet and the
// capacity-drop discharge at the outlet, which is triggered by the last
// cell's density. Requires the CFL condition v_f dt / dx <= 1.
class CtmPlant {
 public:
  CtmPlant(const FlowModel& model, std::vector<double> initial_densities,
           double cell_length, double dt);

  struct Fluxes {
    double f, g;
  };
  // All n+1 fluxes are evaluated on the pre-step state, then every cell is
  // updated; summation/update order is fixed for deterministic conservation.
  Fluxes step(double u, double d_minus, double dt);

  const std::vector<double>& densities() const { return rho_; }
  double density_at(std::size_t cell) const { return rho_[cell]; }  // 0-based
  double front_density() const { return rho_.front(); }
  double back_density() const { return rho_.back(); }

  struct Observation {
    double rho_first, rho_last;
  };
  Observation observe() const { return {rho_.front(), rho_.back()}; }
  int cell_count() const { return static_cast<int>(rho_.size()); }
  double cell_length() const { return dx_; }
  double zone_length() const { return dx_ * static_cast<double>(rho_.size()); }
  double stored_vehicles() const;
  long clamp_events() const { return clamp_events_; }
  const FlowModel& model() const { return model_; }

 private:
  void require_cfl(double dt) const;

  FlowModel model_;
  std::vector<double> rho_;
  std::vector<double> flux_;  // scratch, n+1 interface fluxes
  double dx_;
  long clamp_events_ = 0;
};

}  // namespace vsl
