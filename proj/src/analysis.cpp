#include "vslsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vsl {

std::string to_string(Regime regime) {
  return regime == Regime::Uncongested ? "uncongested" : "congested";
}

std::string to_string(Basin basin) {
  switch (basin) {
    case Basin::Any: return "any k(0)";
    case Basin::AtMostK1: return "k(0) <= k_1";
    case Basin::AboveK1: return "k(0) > k_1";
  }
  return "?";
}

std::string to_string(StabilityKind kind) {
  switch (kind) {
    case StabilityKind::ExponentiallyStable: return "exp-stable";
    case StabilityKind::SaddleUnstablePositiveSide: return "saddle (unstable above)";
    case StabilityKind::StableWithEscapeThreshold: return "exp-stable, escapes past k_1";
  }
  return "?";
}

std::vector<Equilibrium> open_loop_equilibria(const FlowModel& model, double d_minus,
                                              double u_star) {
  if (d_minus < 0.0) throw std::invalid_argument("demand must be non-negative");
  u_star = model.checked_speed(u_star);

  const double c = model.bottleneck().capacity;
  const double c_drop = model.dropped_capacity();
  const double v_f = model.fd().v_f();
  const DerivedConstants& dc = model.constants();

  // Inflow saturates at min{demand, VSL cap}; the supply term only binds in
  // the congested state, where it pins k* = k_2.
  const double inflow_sat = std::min(d_minus, model.vsl_inflow_cap(u_star));

  std::vector<Equilibrium> out;
  if (inflow_sat <= c) {
    Equilibrium eq;
    eq.k_star = inflow_sat / v_f;
    eq.u_star = u_star;
    eq.g_star = inflow_sat;
    eq.regime = Regime::Uncongested;
    eq.basin = inflow_sat < c_drop ? Basin::Any : Basin::AtMostK1;
    out.push_back(eq);
  }
  if (inflow_sat >= c_drop) {
    Equilibrium eq;
    eq.k_star = dc.k_2;
    eq.u_star = u_star;
    eq.g_star = c_drop;
    eq.regime = Regime::Congested;
    eq.basin = inflow_sat > c ? Basin::Any : Basin::AboveK1;
    out.push_back(eq);
  }
  return out;
}

OptimalSpeedLimit optimal_speed_limit(const FlowModel& model, double d_minus) {
  if (d_minus < 0.0) throw std::invalid_argument("demand must be non-negative");
  const double c = model.bottleneck().capacity;
  const double c_drop = model.dropped_capacity();
  const double w = model.fd().w();
  const double k_j = model.fd().k_j();

  OptimalSpeedLimit result;
  if (d_minus > c) {
    result.u_star = model.constants().v_1;
    result.any_above = false;
    result.g_star = c;
    result.requires_initial_at_most_k1 = true;
  } else {
    // Any limit whose inflow cap clears the demand is optimal.
    result.u_star = d_minus > 0.0 ? d_minus * w / (k_j * w - d_minus) : 0.0;
    result.any_above = true;
    result.g_star = d_minus;
    result.requires_initial_at_most_k1 = d_minus > c_drop;
  }
  return result;
}

Stability classify_stability(const FlowModel& model, double zone_length,
                             const Equilibrium& eq, double d_minus) {
  if (!(zone_length > 0.0)) throw std::invalid_argument("zone length must be positive");
  const double v_f = model.fd().v_f();
  const double c = model.bottleneck().capacity;
  const double c_drop = model.dropped_capacity();

  Stability s;
  if (eq.regime == Regime::Congested) {
    s.kind = StabilityKind::ExponentiallyStable;
    s.rate = model.fd().w() / zone_length;
    return s;
  }

  // Uncongested: below k_1 the error decays at v_f / l0. What happens past
  // k_1 depends on whether the saturated inflow exceeds the dropped capacity.
  const double inflow_sat = std::min(d_minus, model.vsl_inflow_cap(eq.u_star));
  const double rel = std::abs(inflow_sat - c) / c;
  if (rel < 1e-12) {
    s.kind = StabilityKind::SaddleUnstablePositiveSide;
    s.rate = v_f / zone_length;  // one-sided, from below only
    s.escape_threshold = model.constants().k_1;
  } else if (inflow_sat > c_drop) {
    s.kind = StabilityKind::StableWithEscapeThreshold;
    s.rate = v_f / zone_length;
    s.escape_threshold = model.constants().k_1;
  } else {
    s.kind = StabilityKind::ExponentiallyStable;
    s.rate = v_f / zone_length;
  }
  return s;
}

std::vector<Equilibrium> closed_loop_equilibria(const FlowModel& model, double d_minus,
                                                double alpha, double beta) {
  if (d_minus < 0.0) throw std::invalid_argument("demand must be non-negative");
  if (alpha < 0.0 || beta < 0.0 || alpha + beta <= 0.0) {
    throw std::invalid_argument("need alpha, beta >= 0 and alpha + beta > 0");
  }

  const double c = model.bottleneck().capacity;
  const double c_drop = model.dropped_capacity();
  const double v_f = model.fd().v_f();
  const DerivedConstants& dc = model.constants();

  std::vector<Equilibrium> out;

  // The uncongested state always exists; the integral term pins it exactly.
  Equilibrium unc;
  unc.regime = Regime::Uncongested;
  if (d_minus >= c) {
    unc.k_star = dc.k_1;
    unc.u_star = dc.v_1;
    unc.g_star = c;
  } else {
    unc.k_star = d_minus / v_f;
    unc.g_star = d_minus;
    unc.u_star = beta > 0.0
                     ? v_f
                     : std::min(v_f, dc.v_1 + alpha * (dc.k_1 - unc.k_star));
  }
  out.push_back(unc);

  if (beta > 0.0) return out;  // the integral term removes the congested state

  // Pure proportional control keeps a congested equilibrium whenever the
  // demand can sustain the dropped discharge.
  if (d_minus >= c_drop) {
    const double alpha_threshold = (dc.v_1 - dc.v_2) / (dc.k_2 - dc.k_1);
    Equilibrium cong;
    cong.regime = Regime::Congested;
    cong.g_star = c_drop;
    if (alpha > alpha_threshold) {
      cong.u_star = dc.v_2;
      cong.k_star = dc.k_1 + (dc.v_1 - dc.v_2) / alpha;
    } else if (alpha < alpha_threshold) {
      cong.k_star = dc.k_2;
      cong.u_star = dc.v_1 - alpha * (dc.k_2 - dc.k_1);
    } else {
      // At the threshold both expressions describe the same point.
      cong.k_star = dc.k_2;
      cong.u_star = dc.v_2;
    }
    cong.basin = Basin::AboveK1;
    out.push_back(cong);
  }
  return out;
}

std::array<double, 2> SwitchedSystem::rhs(double z, double eps) const {
  if (z <= 0.0) {
    return {a_neg[0][0] * z + a_neg[0][1] * eps, a_neg[1][0] * z + a_neg[1][1] * eps};
  }
  return {a_pos[0][0] * z + a_pos[0][1] * eps + b_pos[0],
          a_pos[1][0] * z + a_pos[1][1] * eps + b_pos[1]};
}

SwitchedSystem build_switched_system(const FlowModel& model, double zone_length,
                                     double alpha, double beta) {
  if (!(zone_length > 0.0)) throw std::invalid_argument("zone length must be positive");
  const double v_f = model.fd().v_f();
  const double k_3 = model.constants().k_3;
  const double drop_flux = model.bottleneck().capacity * model.bottleneck().drop;
  const double l0 = zone_length;

  SwitchedSystem sys;
  sys.a_neg = {{{-v_f / l0, k_3 / l0}, {alpha * v_f / l0 - beta, -alpha * k_3 / l0}}};
  sys.a_pos = {{{0.0, k_3 / l0}, {-beta, -alpha * k_3 / l0}}};
  sys.b_pos = {drop_flux / l0, -alpha * drop_flux / l0};
  sys.v_f = v_f;
  sys.drop_flux = drop_flux;
  return sys;
}

LimitBehavior classify_limit_behavior(const SwitchedSystem& system, double z0, double eps0,
                                      double dt, double horizon, double converge_tol,
                                      double window_frac) {
  if (!(dt > 0.0) || !(horizon > 0.0)) {
    throw std::invalid_argument("dt and horizon must be positive");
  }
  const long steps = static_cast<long>(horizon / dt + 0.5);
  const long window_start = steps - std::max<long>(1, static_cast<long>(steps * window_frac));

  std::vector<double> window_z;
  window_z.reserve(static_cast<std::size_t>(steps - window_start));

  double z = z0;
  double eps = eps0;
  double deficit_sum = 0.0;
  for (long j = 0; j < steps; ++j) {
    if (j >= window_start) {
      window_z.push_back(z);
      deficit_sum += z > 0.0 ? system.drop_flux : -system.v_f * z;
    }
    const auto d = system.rhs(z, eps);
    z += dt * d[0];
    eps += dt * d[1];
  }

  LimitBehavior result;
  result.mean_g_deficit = deficit_sum / static_cast<double>(window_z.size());

  double max_abs_z = 0.0;
  for (double v : window_z) max_abs_z = std::max(max_abs_z, std::abs(v));
  if (max_abs_z < converge_tol) {
    result.kind = LimitBehavior::Kind::ConvergesToOrigin;
    return result;
  }

  result.kind = LimitBehavior::Kind::LimitCycle;
  // Period from the spacing of prominent z-peaks inside the window.
  const double prominence = 0.25 * max_abs_z;
  long last_peak = -1;
  std::vector<long> gaps;
  for (std::size_t i = 1; i + 1 < window_z.size(); ++i) {
    if (window_z[i] > prominence && window_z[i] >= window_z[i - 1] &&
        window_z[i] > window_z[i + 1]) {
      const long idx = static_cast<long>(i);
      if (last_peak >= 0) gaps.push_back(idx - last_peak);
      last_peak = idx;
    }
  }
  if (!gaps.empty()) {
    double total = 0.0;
    for (long gap : gaps) total += static_cast<double>(gap);
    result.period = total / static_cast<double>(gaps.size()) * dt;
  }
  return result;
}

}  // namespace vsl
