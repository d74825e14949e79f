#include "vslsim/config.hpp"

#include <fstream>

#include "vslsim/trace_io.hpp"

namespace vsl {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config key '" + path + "': " + what);
}

const json& require(const json& j, const std::string& path, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(path + key, "missing");
  return *it;
}

double number(const json& j, const std::string& path, const char* key) {
  const json& v = require(j, path, key);
  if (!v.is_number()) fail(path + key, "expected a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& path, const char* key, double fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) fail(path + key, "expected a number");
  return it->get<double>();
}

std::string text(const json& j, const std::string& path, const char* key) {
  const json& v = require(j, path, key);
  if (!v.is_string()) fail(path + key, "expected a string");
  return v.get<std::string>();
}

}  // namespace

ScenarioConfig parse_scenario_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  ScenarioConfig config;

  const json& fd = require(j, "", "fd");
  config.v_f = number(fd, "fd.", "v_f");
  config.w = number(fd, "fd.", "w");
  config.k_j = number(fd, "fd.", "k_j");

  const json& bn = require(j, "", "bottleneck");
  config.capacity = number(bn, "bottleneck.", "capacity");
  config.drop = number(bn, "bottleneck.", "drop");

  config.zone_length = number(j, "", "zone_length");
  config.dt = number(j, "", "dt");
  config.horizon = number(j, "", "horizon");

  const json& plant = require(j, "", "plant");
  const std::string plant_kind = text(plant, "plant.", "kind");
  if (plant_kind == "link_queue") {
    config.plant.kind = PlantConfig::Kind::LinkQueue;
  } else if (plant_kind == "ctm") {
    config.plant.kind = PlantConfig::Kind::Ctm;
    config.plant.cells = static_cast<int>(number(plant, "plant.", "cells"));
    config.plant.cell_length = number(plant, "plant.", "cell_length");
  } else {
    fail("plant.kind", "expected 'link_queue' or 'ctm'");
  }

  config.initial_density = number_or(j, "", "initial_density", 0.0);
  if (const auto it = j.find("initial_field"); it != j.end()) {
    if (!it->is_array()) fail("initial_field", "expected an array of densities");
    for (const auto& v : *it) {
      if (!v.is_number()) fail("initial_field", "expected numbers");
      config.initial_field.push_back(v.get<double>());
    }
  }

  const json& ctrl = require(j, "", "controller");
  const std::string ctrl_kind = text(ctrl, "controller.", "kind");
  if (ctrl_kind == "none") {
    config.controller.kind = ControllerConfig::Kind::None;
  } else if (ctrl_kind == "constant") {
    config.controller.kind = ControllerConfig::Kind::Constant;
    config.controller.u_const = number(ctrl, "controller.", "u_const");
  } else if (ctrl_kind == "pi") {
    config.controller.kind = ControllerConfig::Kind::Pi;
    config.controller.alpha = number_or(ctrl, "controller.", "alpha", 0.0);
    config.controller.beta = number_or(ctrl, "controller.", "beta", 0.0);
  } else {
    fail("controller.kind", "expected 'none', 'constant' or 'pi'");
  }
  config.controller.u_min = number_or(ctrl, "controller.", "u_min", 0.0);
  config.controller.xi = number_or(ctrl, "controller.", "xi", 0.0);

  const json& demand = require(j, "", "demand");
  const std::string demand_kind = text(demand, "demand.", "kind");
  if (demand_kind == "constant") {
    config.demand.kind = DemandSource::Kind::Direct;
    config.demand.direct_value = number(demand, "demand.", "value");
  } else if (demand_kind == "constant_arrivals") {
    config.demand.kind = DemandSource::Kind::Queued;
    config.demand.pattern.kind = ArrivalPattern::Kind::Constant;
    config.demand.pattern.value = number(demand, "demand.", "value");
  } else if (demand_kind == "trapezoid_noise") {
    config.demand.kind = DemandSource::Kind::Queued;
    config.demand.pattern.kind = ArrivalPattern::Kind::TrapezoidNoise;
    config.demand.pattern.peak = number(demand, "demand.", "peak");
    config.demand.pattern.ramp_rate = number_or(demand, "demand.", "ramp_rate", 5e-4);
    config.demand.pattern.fall_start = number_or(demand, "demand.", "fall_start", 4000.0);
    config.demand.pattern.noise_std = number_or(demand, "demand.", "noise_std", 0.0);
    config.demand.pattern.horizon = number_or(demand, "demand.", "horizon", config.horizon);
    if (const auto it = demand.find("seed"); it != demand.end()) {
      if (!it->is_number_unsigned()) fail("demand.seed", "expected a non-negative integer");
      config.demand.pattern.seed = it->get<std::uint64_t>();
    }
  } else {
    fail("demand.kind", "expected 'constant', 'constant_arrivals' or 'trapezoid_noise'");
  }

  config.sensor_cell = static_cast<int>(number_or(j, "", "sensor_cell", 0.0));
  config.window_frac = number_or(j, "", "window_frac", 0.25);
  if (!(config.window_frac > 0.0 && config.window_frac <= 1.0)) {
    fail("window_frac", "must lie in (0, 1]");
  }

  config.make_model();  // full cross-field validation
  return config;
}

LoadedConfig load_scenario_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  LoadedConfig loaded;
  loaded.scenario = parse_scenario_config(j);
  loaded.hash = fnv1a_hex(j.dump());
  return loaded;
}

}  // namespace vsl
