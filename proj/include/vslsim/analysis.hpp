#pragma once

#include <array>
#include <string>
#include <vector>

#include "vslsim/flow.hpp"

namespace vsl {

enum class Regime { Uncongested, Congested };

// Which initial densities reach an equilibrium when several coexist.
enum class Basin { Any, AtMostK1, AboveK1 };

struct Equilibrium {
  double k_star = 0.0;  // [veh/m]
  double u_star = 0.0;  // [m/s]
  double g_star = 0.0;  // discharging flow-rate [veh/s]
  Regime regime = Regime::Uncongested;
  Basin basin = Basin::Any;
};

std::string to_string(Regime regime);
std::string to_string(Basin basin);

// Every equilibrium of the constant-speed-limit plant for the given upstream
// demand and limit, with basin notes where equilibria coexist.
std::vector<Equilibrium> open_loop_equilibria(const FlowModel& model, double d_minus,
                                              double u_star);

struct OptimalSpeedLimit {
  double u_star = 0.0;  // recommended limit, or the threshold when any_above
  bool any_above = false;  // any u >= u_star is equally optimal
  double g_star = 0.0;     // best achievable discharging flow-rate
  // Above the dropped capacity the optimum is only reached from k(0) <= k_1.
  bool requires_initial_at_most_k1 = false;
};

OptimalSpeedLimit optimal_speed_limit(const FlowModel& model, double d_minus);

enum class StabilityKind {
  ExponentiallyStable,
  SaddleUnstablePositiveSide,
  StableWithEscapeThreshold,
};

struct Stability {
  StabilityKind kind = StabilityKind::ExponentiallyStable;
  double rate = 0.0;             // local decay rate [1/s]
  double escape_threshold = 0.0; // density past which the state escapes (if any)
};

std::string to_string(StabilityKind kind);

Stability classify_stability(const FlowModel& model, double zone_length,
                             const Equilibrium& eq, double d_minus);

// Equilibria of the PI closed loop. With an integral term the congested state
// is removed and the result is unique; a pure proportional controller keeps a
// congested equilibrium whenever the demand exceeds the dropped capacity.
std::vector<Equilibrium> closed_loop_equilibria(const FlowModel& model, double d_minus,
                                                double alpha, double beta);

// Linearization of the closed loop around (k_1, v_1) in the deviations
// z = k - k_1, eps = u - v_1: linear for z <= 0, affine for z > 0.
struct SwitchedSystem {
  std::array<std::array<double, 2>, 2> a_neg{};
  std::array<std::array<double, 2>, 2> a_pos{};
  std::array<double, 2> b_pos{};
  double v_f = 0.0;
  double drop_flux = 0.0;  // C * drop, the discharge lost while z > 0

  std::array<double, 2> rhs(double z, double eps) const;
};

SwitchedSystem build_switched_system(const FlowModel& model, double zone_length,
                                     double alpha, double beta);

struct LimitBehavior {
  enum class Kind { ConvergesToOrigin, LimitCycle };
  Kind kind = Kind::ConvergesToOrigin;
  double period = 0.0;          // [s], 0 when converging
  double mean_g_deficit = 0.0;  // mean discharge shortfall below C in the window
};

// Classifies by forward-Euler simulation: convergent when the late-window
// amplitude of z falls below converge_tol, otherwise a limit cycle whose
// period comes from the spacing of the late-window peaks of z.
LimitBehavior classify_limit_behavior(const SwitchedSystem& system, double z0, double eps0,
                                      double dt, double horizon, double converge_tol,
                                      double window_frac = 0.25);

}  // namespace vsl
