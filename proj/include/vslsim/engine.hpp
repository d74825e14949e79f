#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vslsim/controller.hpp"
#include "vslsim/demand.hpp"
#include "vslsim/flow.hpp"

namespace vsl {

struct PlantConfig {
  enum class Kind { LinkQueue, Ctm };
  Kind kind = Kind::LinkQueue;
  int cells = 20;           // Ctm only
  double cell_length = 30;  // Ctm only [m]
};

// Demand either drives the zone inlet directly (constant d-) or feeds a
// point queue whose spill-back caps what the arrivals can offer.
struct DemandSource {
  enum class Kind { Direct, Queued };
  Kind kind = Kind::Direct;
  double direct_value = 0.0;
  ArrivalPattern pattern;
};

struct ScenarioConfig {
  double v_f = 30.0;
  double w = 4.375;
  double k_j = 2.0 / 7.0;
  double capacity = 6.0 / 11.0;
  double drop = 0.2;
  double zone_length = 600.0;
  double dt = 1.0;
  double horizon = 8000.0;

  PlantConfig plant;
  double initial_density = 0.0;
  std::vector<double> initial_field;  // optional, Ctm; overrides initial_density
  ControllerConfig controller;
  DemandSource demand;
  int sensor_cell = 0;  // Ctm: 1-based observation cell, 0 = last cell
  double window_frac = 0.25;

  FlowModel make_model() const;  // validates everything, throws ConfigError
  long step_count() const;
  std::uint64_t seed() const {
    return demand.kind == DemandSource::Kind::Queued ? demand.pattern.seed : 0;
  }
};

struct StepRecord {
  double t;        // time at the start of the step [s]
  double k_obs;    // sensor density at the start of the step [veh/m]
  double u;        // speed limit applied during the step [m/s]
  double f, g;     // boundary fluxes during the step [veh/s]
  double lambda;   // queue size at the start of the step [veh]
  double d_minus;  // demand offered to the zone inlet [veh/s]
  double r;        // arrival rate [veh/s]
};

struct TraceSummary {
  double total_arrivals = 0.0;
  double total_departures = 0.0;
  std::optional<double> avg_travel_time;  // absent when nothing departed
  double late_mean_g = 0.0;
  double late_min_g = 0.0;
  double late_max_g = 0.0;
  double late_mean_k_obs = 0.0;
  double late_max_abs_target_err = 0.0;  // max |k_obs - k_target| in the window
  long late_drop_steps = 0;              // window steps with the outlet past k_1
  long late_steps = 0;
  long drop_steps = 0;  // over the whole run
  long clamp_events = 0;
  double max_conservation_residual = 0.0;
  double final_k_obs = 0.0;
  double window_frac = 0.25;
  double target_density = 0.0;
};

struct ScenarioTrace {
  std::vector<StepRecord> steps;
  std::vector<std::vector<double>> fields;  // Ctm: start-of-step densities per step
  double dt = 1.0;
  std::uint64_t seed = 0;
  TraceSummary summary;
};

ScenarioTrace run_scenario(const ScenarioConfig& config);

// Recompute window metrics of an existing trace (e.g. for another window).
TraceSummary summarize_trace(const ScenarioTrace& trace, const ScenarioConfig& config,
                             double window_frac);

// 1 - TT_with / TT_baseline. Both traces must share dt, horizon and the
// exact arrival realization (same seed).
double reduction_ratio(const ScenarioTrace& with_vsl, const ScenarioTrace& baseline);

struct SweepPoint {
  double parameter;
  double result;
};

// Late-window mean discharge as a function of the target-density bias xi.
std::vector<SweepPoint> sweep_target_bias(const ScenarioConfig& base,
                                          const std::vector<double>& xi_values);

// Travel-time reduction ratio as a function of the capacity-drop magnitude.
// The baseline is the same scenario with the controller removed; stochastic
// scenarios are averaged over seed_count consecutive seeds.
std::vector<SweepPoint> sweep_capacity_drop(const ScenarioConfig& with_vsl,
                                            const std::vector<double>& drops,
                                            int seed_count);

// Paired (controller on / controller off) runs over consecutive seeds,
// returning the per-seed reduction ratios.
std::vector<double> reduction_over_seeds(const ScenarioConfig& with_vsl, int seed_count);

}  // namespace vsl
