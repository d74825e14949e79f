#include "vslsim/ctm.hpp"

#include <string>

namespace vsl {

CtmPlant::CtmPlant(const FlowModel& model, std::vector<double> initial_densities,
                   double cell_length, double dt)
    : model_(model), rho_(std::move(initial_densities)), dx_(cell_length) {
  if (rho_.empty()) throw ConfigError("cell state needs at least one cell");
  if (!(dx_ > 0.0)) throw ConfigError("cell length must be positive");
  require_cfl(dt);
  for (auto& rho : rho_) rho = model_.fd().checked_density(rho);
  flux_.assign(rho_.size() + 1, 0.0);
}

void CtmPlant::require_cfl(double dt) const {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const double cfl = model_.fd().v_f() * dt / dx_;
  if (cfl > 1.0 + 1e-12) {
    throw ConfigError("CFL condition violated: v_f dt / dx = " + std::to_string(cfl));
  }
}

double CtmPlant::stored_vehicles() const {
  double total = 0.0;
  for (double rho : rho_) total += rho;
  return total * dx_;
}

CtmPlant::Fluxes CtmPlant::step(double u, double d_minus, double dt) {
  require_cfl(dt);
  const std::size_t n = rho_.size();

  flux_[0] = model_.inflow_flux(d_minus, u, rho_[0]);
  for (std::size_t i = 1; i < n; ++i) {
    flux_[i] = model_.interior_flux(rho_[i - 1], rho_[i]);
  }
  flux_[n] = model_.discharge_flux(rho_[n - 1]);

  const double scale = dt / dx_;
  const double k_j = model_.fd().k_j();
  for (std::size_t i = 0; i < n; ++i) {
    double rho = rho_[i] + scale * (flux_[i] - flux_[i + 1]);
    // Bounds are preserved under CFL <= 1; tolerate rounding, flag anything else.
    if (rho < 0.0) {
      if (rho < -FundamentalDiagram::kDensityTol) {
        throw InvariantError("cell " + std::to_string(i) + " density went negative");
      }
      rho = 0.0;
      ++clamp_events_;
    } else if (rho > k_j) {
      if (rho > k_j + FundamentalDiagram::kDensityTol) {
        throw InvariantError("cell " + std::to_string(i) + " density exceeded jam density");
      }
      rho = k_j;
      ++clamp_events_;
    }
    rho_[i] = rho;
  }
  return {flux_[0], flux_[n]};
}

}  // namespace vsl
