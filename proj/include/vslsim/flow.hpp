#pragma once

#include "vslsim/errors.hpp"

namespace vsl {

// Triangular flow-density relation q(rho) = min{v_f rho, w (k_j - rho)}.
// All quantities are SI: m, s, veh/m, veh/s.
class FundamentalDiagram {
 public:
  FundamentalDiagram(double free_flow_speed, double shock_speed, double jam_density);

  double v_f() const { return v_f_; }
  double w() const { return w_; }
  double k_j() const { return k_j_; }

  // Density at which the diagram attains its maximum flow.
  double critical_density() const { return k_c_; }
  double capacity() const { return v_f_ * k_c_; }

  double flow(double rho) const;
  double demand(double rho) const;  // sending flow: min{capacity, v_f rho}
  double supply(double rho) const;  // receiving flow: min{capacity, w (k_j - rho)}

  // Snaps rho onto [0, k_j] when within kDensityTol, throws std::domain_error
  // otherwise. The integrators below provably preserve bounds, so anything
  // further out is a hard error rather than something to silently clamp.
  double checked_density(double rho) const;

  static constexpr double kDensityTol = 1e-12;

 private:
  double v_f_, w_, k_j_, k_c_;
};

// Lane-drop bottleneck: downstream capacity and the relative discharge drop
// once the upstream density exceeds the onset density k_1.
struct Bottleneck {
  double capacity = 0.0;  // C [veh/s]
  double drop = 0.0;      // Delta, 0 <= drop < 1
};

// Constants derived from (diagram, bottleneck). Short names are the model's
// conventional ones; see the accessors on FlowModel for their meaning.
struct DerivedConstants {
  double k_c;  // critical density
  double k_1;  // C / v_f: highest density that still discharges C
  double k_2;  // congested density whose supply equals the dropped capacity
  double v_1;  // speed limit whose inflow cap equals C
  double v_2;  // speed limit whose inflow cap equals (1 - drop) C
  double k_3;  // slope of the inflow cap at u = v_1
};

// Fundamental diagram + bottleneck + derived constants, with the two boundary
// flux laws shared by both plant models. Immutable value type; all methods
// are pure and safe to call concurrently.
class FlowModel {
 public:
  FlowModel(const FundamentalDiagram& fd, const Bottleneck& bottleneck);

  const FundamentalDiagram& fd() const { return fd_; }
  const Bottleneck& bottleneck() const { return bn_; }
  const DerivedConstants& constants() const { return dc_; }

  // Largest in-flux a speed limit u admits: u/(u+w) w k_j.
  double vsl_inflow_cap(double u) const;

  // Bottleneck out-flux from the density observed at the outlet:
  // v_f k for k <= k_1, dropped capacity (1-drop) C strictly above.
  double discharge_flux(double k_obs) const;

  // In-flux at the zone inlet: min{upstream demand, VSL cap, inlet supply}.
  double inflow_flux(double d_minus, double u, double k_up) const;

  // Godunov flux between two cells: min{demand(left), supply(right)}.
  double interior_flux(double rho_left, double rho_right) const;

  double dropped_capacity() const { return (1.0 - bn_.drop) * bn_.capacity; }

  // Validates a speed limit against [0, v_f] with a small tolerance snap.
  double checked_speed(double u) const;

 private:
  FundamentalDiagram fd_;
  Bottleneck bn_;
  DerivedConstants dc_;
};

}  // namespace vsl
