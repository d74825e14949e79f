#include "vslsim/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vsl {

namespace {

[[noreturn]] void domain_fail(const char* what, double value) {
  throw std::domain_error(std::string(what) + " out of range: " + std::to_string(value));
}

}  // namespace

FundamentalDiagram::FundamentalDiagram(double free_flow_speed, double shock_speed,
                                       double jam_density)
    : v_f_(free_flow_speed), w_(shock_speed), k_j_(jam_density) {
  if (!(v_f_ > 0.0) || !(w_ > 0.0) || !(k_j_ > 0.0)) {
    throw ConfigError("fundamental diagram requires v_f > 0, w > 0, k_j > 0");
  }
  k_c_ = w_ * k_j_ / (v_f_ + w_);
}

double FundamentalDiagram::checked_density(double rho) const {
  if (rho < 0.0) {
    if (rho < -kDensityTol) domain_fail("density", rho);
    return 0.0;
  }
  if (rho > k_j_) {
    if (rho > k_j_ + kDensityTol) domain_fail("density", rho);
    return k_j_;
  }
  return rho;
}

double FundamentalDiagram::flow(double rho) const {
  rho = checked_density(rho);
  return std::min(v_f_ * rho, w_ * (k_j_ - rho));
}

double FundamentalDiagram::demand(double rho) const {
  rho = checked_density(rho);
  return std::min(capacity(), v_f_ * rho);
}

double FundamentalDiagram::supply(double rho) const {
  rho = checked_density(rho);
  return std::min(capacity(), w_ * (k_j_ - rho));
}

FlowModel::FlowModel(const FundamentalDiagram& fd, const Bottleneck& bottleneck)
    : fd_(fd), bn_(bottleneck) {
  if (!(bn_.capacity > 0.0)) {
    throw ConfigError("bottleneck capacity must be positive");
  }
  if (!(bn_.capacity < fd_.capacity())) {
    throw ConfigError("bottleneck capacity must be below the diagram capacity v_f k_c");
  }
  if (!(bn_.drop >= 0.0 && bn_.drop < 1.0)) {
    throw ConfigError("capacity drop must lie in [0, 1)");
  }

  const double v_f = fd_.v_f();
  const double w = fd_.w();
  const double k_j = fd_.k_j();
  const double c = bn_.capacity;
  const double c_drop = (1.0 - bn_.drop) * c;

  dc_.k_c = fd_.critical_density();
  dc_.k_1 = c / v_f;
  dc_.k_2 = k_j - c_drop / w;
  dc_.v_1 = c * w / (k_j * w - c);
  dc_.v_2 = c_drop * w / (k_j * w - c_drop);
  dc_.k_3 = w * w * k_j / ((dc_.v_1 + w) * (dc_.v_1 + w));

  if (!(dc_.k_1 < dc_.k_c && dc_.k_c < dc_.k_2 && dc_.k_2 < k_j)) {
    throw ConfigError("derived densities violate k_1 < k_c < k_2 < k_j");
  }
  if (!(dc_.v_2 <= dc_.v_1 && dc_.v_1 < v_f)) {
    throw ConfigError("derived speeds violate v_2 <= v_1 < v_f");
  }
}

double FlowModel::checked_speed(double u) const {
  const double v_f = fd_.v_f();
  if (u < 0.0) {
    if (u < -1e-12) domain_fail("speed limit", u);
    return 0.0;
  }
  if (u > v_f) {
    if (u > v_f * (1.0 + 1e-12)) domain_fail("speed limit", u);
    return v_f;
  }
  return u;
}

double FlowModel::vsl_inflow_cap(double u) const {
  u = checked_speed(u);
  return u / (u + fd_.w()) * fd_.w() * fd_.k_j();
}

double FlowModel::discharge_flux(double k_obs) const {
  k_obs = fd_.checked_density(k_obs);
  if (k_obs <= dc_.k_1) return fd_.v_f() * k_obs;
  return dropped_capacity();
}

double FlowModel::inflow_flux(double d_minus, double u, double k_up) const {
  if (d_minus < 0.0) {
    if (d_minus < -1e-12) domain_fail("upstream demand", d_minus);
    d_minus = 0.0;
  }
  k_up = fd_.checked_density(k_up);
  return std::min({d_minus, vsl_inflow_cap(u), fd_.w() * (fd_.k_j() - k_up)});
}

double FlowModel::interior_flux(double rho_left, double rho_right) const {
  return std::min(fd_.demand(rho_left), fd_.supply(rho_right));
}

}  // namespace vsl
