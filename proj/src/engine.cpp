#include "vslsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "vslsim/ctm.hpp"
#include "vslsim/link_queue.hpp"

namespace vsl {

FlowModel ScenarioConfig::make_model() const {
  FlowModel model(FundamentalDiagram(v_f, w, k_j), Bottleneck{capacity, drop});
  if (!(zone_length > 0.0)) throw ConfigError("zone_length must be positive");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(horizon >= dt)) throw ConfigError("horizon must cover at least one step");
  const double steps = horizon / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9) {
    throw ConfigError("horizon must be a multiple of dt");
  }
  if (plant.kind == PlantConfig::Kind::Ctm) {
    if (plant.cells < 1) throw ConfigError("ctm needs at least one cell");
    if (!(plant.cell_length > 0.0)) throw ConfigError("cell_length must be positive");
    const double total = plant.cell_length * plant.cells;
    if (std::abs(total - zone_length) > 1e-9 * zone_length) {
      throw ConfigError("cells * cell_length must equal zone_length");
    }
    if (v_f * dt / plant.cell_length > 1.0 + 1e-12) {
      throw ConfigError("CFL condition violated: v_f dt / dx must be <= 1");
    }
    if (!initial_field.empty() &&
        initial_field.size() != static_cast<std::size_t>(plant.cells)) {
      throw ConfigError("initial_field length must match the cell count");
    }
    if (sensor_cell < 0 || sensor_cell > plant.cells) {
      throw ConfigError("sensor_cell must lie in [1, cells] (0 = last cell)");
    }
  }
  controller.validate(model);
  if (demand.kind == DemandSource::Kind::Direct) {
    if (demand.direct_value < 0.0) throw ConfigError("demand must be non-negative");
  } else {
    if (demand.pattern.kind == ArrivalPattern::Kind::TrapezoidNoise &&
        (demand.pattern.peak < 0.0 || demand.pattern.noise_std < 0.0 ||
         demand.pattern.ramp_rate <= 0.0)) {
      throw ConfigError("arrival pattern needs peak, noise_std >= 0 and ramp_rate > 0");
    }
    if (demand.pattern.kind == ArrivalPattern::Kind::Constant &&
        demand.pattern.value < 0.0) {
      throw ConfigError("arrival rate must be non-negative");
    }
  }
  return model;
}

long ScenarioConfig::step_count() const {
  return static_cast<long>(std::round(horizon / dt));
}

namespace {

// Value-typed plant dispatch; both plants expose the same stepping surface.
struct PlantRunner {
  std::optional<LinkQueuePlant> link;
  std::optional<CtmPlant> ctm;
  int sensor_index = 0;  // 0-based, Ctm only

  double sensor() const {
    return link ? link->density() : ctm->density_at(static_cast<std::size_t>(sensor_index));
  }
  double outlet() const { return link ? link->density() : ctm->back_density(); }
  double stored() const { return link ? link->stored_vehicles() : ctm->stored_vehicles(); }
  long clamp_events() const { return link ? link->clamp_events() : ctm->clamp_events(); }

  LinkQueuePlant::Fluxes step(double u, double d_minus, double dt) {
    if (link) return link->step(u, d_minus, dt);
    const auto fx = ctm->step(u, d_minus, dt);
    return {fx.f, fx.g};
  }
};

PlantRunner make_plant(const ScenarioConfig& config, const FlowModel& model) {
  PlantRunner plant;
  if (config.plant.kind == PlantConfig::Kind::LinkQueue) {
    plant.link.emplace(model, config.zone_length, config.initial_density);
  } else {
    std::vector<double> field = config.initial_field;
    if (field.empty()) {
      field.assign(static_cast<std::size_t>(config.plant.cells), config.initial_density);
    }
    plant.ctm.emplace(model, std::move(field), config.plant.cell_length, config.dt);
    plant.sensor_index =
        config.sensor_cell == 0 ? config.plant.cells - 1 : config.sensor_cell - 1;
  }
  return plant;
}

}  // namespace

ScenarioTrace run_scenario(const ScenarioConfig& config) {
  const FlowModel model = config.make_model();
  const long steps = config.step_count();
  const bool queued = config.demand.kind == DemandSource::Kind::Queued;
  const double dt = config.dt;
  const double cap = model.fd().capacity();

  PlantRunner plant = make_plant(config, model);
  PointQueue queue;
  Rng rng(config.demand.pattern.seed);
  ControllerState ctrl = controller_init(config.controller, model, plant.sensor());

  ScenarioTrace trace;
  trace.dt = dt;
  trace.seed = config.seed();
  trace.steps.reserve(static_cast<std::size_t>(steps));
  if (plant.ctm) trace.fields.reserve(static_cast<std::size_t>(steps));

  const double stored0 = plant.stored();
  double arrivals = 0.0;
  double departures = 0.0;
  double area = 0.0;  // integral of (cumulative arrivals - cumulative departures)
  double max_residual = 0.0;
  const double u_lo = config.controller.u_min - 1e-12;
  const double u_hi = model.fd().v_f() + 1e-12;

  for (long j = 0; j < steps; ++j) {
    const double t = static_cast<double>(j) * dt;
    const double r = queued ? arrival_rate(config.demand.pattern, t, rng)
                            : config.demand.direct_value;
    const double d_minus = queued ? queue.demand(r, dt, cap) : r;

    if (plant.ctm) trace.fields.push_back(plant.ctm->densities());
    StepRecord rec{t, plant.sensor(), ctrl.u, 0.0, 0.0, queue.size(), d_minus, r};

    LinkQueuePlant::Fluxes fx{};
    try {
      fx = plant.step(ctrl.u, d_minus, dt);
      if (queued) queue.step(r, fx.f, dt);
    } catch (const InvariantError& e) {
      throw InvariantError("step " + std::to_string(j) + ": " + e.what());
    }
    ctrl = controller_update(config.controller, model, ctrl, plant.sensor(), dt);
    if (ctrl.u < u_lo || ctrl.u > u_hi) {
      throw InvariantError("step " + std::to_string(j) + ": speed limit left [u_min, v_f]");
    }

    rec.f = fx.f;
    rec.g = fx.g;
    arrivals += (queued ? r : fx.f) * dt;
    departures += fx.g * dt;
    area += (arrivals - departures) * dt;

    const double residual =
        std::abs((arrivals - departures) - (queue.size() + plant.stored() - stored0));
    max_residual = std::max(max_residual, residual);
    if (residual > 1e-9) {
      throw InvariantError("step " + std::to_string(j) + ": conservation residual " +
                           std::to_string(residual) + " veh");
    }
    trace.steps.push_back(rec);
  }

  trace.summary = summarize_trace(trace, config, config.window_frac);
  trace.summary.total_arrivals = arrivals;
  trace.summary.total_departures = departures;
  if (departures > 0.0) trace.summary.avg_travel_time = area / departures;
  trace.summary.clamp_events = plant.clamp_events();
  trace.summary.max_conservation_residual = max_residual;
  trace.summary.final_k_obs = plant.sensor();
  return trace;
}

TraceSummary summarize_trace(const ScenarioTrace& trace, const ScenarioConfig& config,
                             double window_frac) {
  const FlowModel model = config.make_model();
  const double k_1 = model.constants().k_1;
  const double target = config.controller.target_density(model);

  TraceSummary s;
  s.window_frac = window_frac;
  s.target_density = target;

  const long n = static_cast<long>(trace.steps.size());
  if (n == 0) return s;

  const long late = std::max<long>(1, static_cast<long>(std::llround(n * window_frac)));
  const long start = n - late;
  s.late_steps = late;
  s.late_min_g = trace.steps[static_cast<std::size_t>(start)].g;
  s.late_max_g = s.late_min_g;

  double g_sum = 0.0;
  double k_sum = 0.0;
  for (long j = 0; j < n; ++j) {
    const auto& rec = trace.steps[static_cast<std::size_t>(j)];
    const double outlet =
        trace.fields.empty() ? rec.k_obs : trace.fields[static_cast<std::size_t>(j)].back();
    const bool dropped = outlet > k_1;
    if (dropped) ++s.drop_steps;
    if (j >= start) {
      g_sum += rec.g;
      k_sum += rec.k_obs;
      s.late_min_g = std::min(s.late_min_g, rec.g);
      s.late_max_g = std::max(s.late_max_g, rec.g);
      s.late_max_abs_target_err =
          std::max(s.late_max_abs_target_err, std::abs(rec.k_obs - target));
      if (dropped) ++s.late_drop_steps;
    }
  }
  s.late_mean_g = g_sum / static_cast<double>(late);
  s.late_mean_k_obs = k_sum / static_cast<double>(late);
  return s;
}

double reduction_ratio(const ScenarioTrace& with_vsl, const ScenarioTrace& baseline) {
  if (with_vsl.steps.size() != baseline.steps.size() || with_vsl.dt != baseline.dt) {
    throw ConfigError("compare requires traces with identical horizon and dt");
  }
  for (std::size_t j = 0; j < with_vsl.steps.size(); ++j) {
    if (with_vsl.steps[j].r != baseline.steps[j].r) {
      throw ConfigError("compare requires the same arrival realization (same seed)");
    }
  }
  if (!with_vsl.summary.avg_travel_time || !baseline.summary.avg_travel_time) {
    throw ConfigError("compare requires traces with departures");
  }
  return 1.0 - *with_vsl.summary.avg_travel_time / *baseline.summary.avg_travel_time;
}

namespace {

// Fan a batch of runs out across workers; results keep the input order.
std::vector<ScenarioTrace> run_batch(const std::vector<ScenarioConfig>& configs) {
  std::vector<std::future<ScenarioTrace>> futures;
  futures.reserve(configs.size());
  for (const auto& config : configs) {
    futures.push_back(std::async(std::launch::async, [&config] { return run_scenario(config); }));
  }
  std::vector<ScenarioTrace> traces;
  traces.reserve(configs.size());
  for (auto& fut : futures) traces.push_back(fut.get());
  return traces;
}

}  // namespace

std::vector<double> reduction_over_seeds(const ScenarioConfig& with_vsl, int seed_count) {
  if (seed_count < 1) throw ConfigError("seed_count must be at least 1");
  ScenarioConfig baseline = with_vsl;
  baseline.controller.kind = ControllerConfig::Kind::None;

  std::vector<ScenarioConfig> configs;
  for (int i = 0; i < seed_count; ++i) {
    ScenarioConfig on = with_vsl;
    ScenarioConfig off = baseline;
    on.demand.pattern.seed = with_vsl.demand.pattern.seed + static_cast<std::uint64_t>(i);
    off.demand.pattern.seed = on.demand.pattern.seed;
    configs.push_back(on);
    configs.push_back(off);
  }
  const auto traces = run_batch(configs);

  std::vector<double> reductions;
  reductions.reserve(static_cast<std::size_t>(seed_count));
  for (int i = 0; i < seed_count; ++i) {
    reductions.push_back(reduction_ratio(traces[static_cast<std::size_t>(2 * i)],
                                         traces[static_cast<std::size_t>(2 * i + 1)]));
  }
  return reductions;
}

std::vector<SweepPoint> sweep_target_bias(const ScenarioConfig& base,
                                          const std::vector<double>& xi_values) {
  std::vector<ScenarioConfig> configs;
  configs.reserve(xi_values.size());
  for (double xi : xi_values) {
    ScenarioConfig config = base;
    config.controller.xi = xi;
    configs.push_back(config);
  }
  const auto traces = run_batch(configs);

  std::vector<SweepPoint> points;
  points.reserve(xi_values.size());
  for (std::size_t i = 0; i < xi_values.size(); ++i) {
    points.push_back({xi_values[i], traces[i].summary.late_mean_g});
  }
  return points;
}

std::vector<SweepPoint> sweep_capacity_drop(const ScenarioConfig& with_vsl,
                                            const std::vector<double>& drops,
                                            int seed_count) {
  std::vector<SweepPoint> points;
  points.reserve(drops.size());
  const bool stochastic = with_vsl.demand.kind == DemandSource::Kind::Queued &&
                          with_vsl.demand.pattern.kind == ArrivalPattern::Kind::TrapezoidNoise;
  const int seeds = stochastic ? seed_count : 1;
  for (double drop : drops) {
    ScenarioConfig config = with_vsl;
    config.drop = drop;
    const auto reductions = reduction_over_seeds(config, seeds);
    double mean = 0.0;
    for (double v : reductions) mean += v;
    mean /= static_cast<double>(reductions.size());
    points.push_back({drop, mean});
  }
  return points;
}

}  // namespace vsl
