// Scenario CLI: simulate configured scenarios, tabulate equilibria, sweep
// parameters and compare paired runs. Exit codes: 0 success, 2 config error,
// 3 invariant violation during a run.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vslsim/analysis.hpp"
#include "vslsim/config.hpp"
#include "vslsim/engine.hpp"
#include "vslsim/svg.hpp"
#include "vslsim/trace_io.hpp"
#include "vslsim/version.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct SimulateArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> window_frac;
  bool plot = false;
};

vsl::LoadedConfig load_with_overrides(const std::string& path,
                                      const std::optional<std::uint64_t>& seed,
                                      const std::optional<double>& window_frac) {
  vsl::LoadedConfig loaded = vsl::load_scenario_config(path);
  if (seed) loaded.scenario.demand.pattern.seed = *seed;
  if (window_frac) loaded.scenario.window_frac = *window_frac;
  return loaded;
}

int run_simulate(const SimulateArgs& args) {
  const vsl::LoadedConfig loaded =
      load_with_overrides(args.config_path, args.seed, args.window_frac);
  const vsl::ScenarioConfig& config = loaded.scenario;

  const auto trace = vsl::run_scenario(config);

  fs::create_directories(args.out_dir);
  const fs::path trace_path = fs::path(args.out_dir) / "trace.csv";
  const fs::path summary_path = fs::path(args.out_dir) / "summary.json";
  vsl::write_trace_csv(trace_path, trace);

  vsl::RunMetadata meta;
  meta.config_hash = loaded.hash;
  meta.seed = trace.seed;
  meta.trace_path = trace_path.string();
  vsl::write_summary_json(summary_path, trace.summary, meta);

  if (args.plot) {
    vsl::write_timeseries_panels_svg(fs::path(args.out_dir) / "panels.svg", trace);
    if (!trace.fields.empty()) {
      vsl::write_density_contour_svg(fs::path(args.out_dir) / "contour.svg", trace,
                                     config.k_j, config.plant.cell_length);
    }
  }

  std::cout << "wrote " << trace_path.string() << " (" << trace.steps.size() << " steps)\n"
            << "late mean discharge: " << trace.summary.late_mean_g << " veh/s\n";
  if (trace.summary.avg_travel_time) {
    std::cout << "average travel time: " << *trace.summary.avg_travel_time << " s\n";
  }
  return 0;
}

void print_equilibrium_row(const vsl::FlowModel& model, double zone_length,
                           const vsl::Equilibrium& eq, std::optional<double> d_minus) {
  std::cout << "  k* = " << eq.k_star << " veh/m, u* = " << eq.u_star
            << " m/s, g* = " << eq.g_star << " veh/s, " << to_string(eq.regime) << ", "
            << to_string(eq.basin);
  if (d_minus) {
    const auto s = vsl::classify_stability(model, zone_length, eq, *d_minus);
    std::cout << ", " << to_string(s.kind) << " (rate " << s.rate << " 1/s)";
  }
  std::cout << "\n";
}

int run_equilibria(const std::string& config_path, double demand,
                   std::optional<double> u_star, std::optional<double> alpha,
                   std::optional<double> beta) {
  vsl::ScenarioConfig scenario;  // reference parameters by default
  if (!config_path.empty()) scenario = vsl::load_scenario_config(config_path).scenario;
  const vsl::FlowModel model = scenario.make_model();

  if (alpha || beta) {
    const double a = alpha.value_or(0.0);
    const double b = beta.value_or(0.0);
    std::cout << "closed-loop equilibria, d- = " << demand << " veh/s, alpha = " << a
              << ", beta = " << b << ":\n";
    for (const auto& eq : vsl::closed_loop_equilibria(model, demand, a, b)) {
      print_equilibrium_row(model, scenario.zone_length, eq, std::nullopt);
    }
    return 0;
  }

  const double u = u_star.value_or(model.fd().v_f());
  std::cout << "open-loop equilibria, d- = " << demand << " veh/s, u* = " << u << " m/s:\n";
  for (const auto& eq : vsl::open_loop_equilibria(model, demand, u)) {
    print_equilibrium_row(model, scenario.zone_length, eq, demand);
  }
  const auto best = vsl::optimal_speed_limit(model, demand);
  std::cout << "optimal limit: u* " << (best.any_above ? ">= " : "= ") << best.u_star
            << " m/s, g* = " << best.g_star << " veh/s"
            << (best.requires_initial_at_most_k1 ? " (needs k(0) <= k_1)" : "") << "\n";
  return 0;
}

int run_sweep(const std::string& kind, const std::string& config_path,
              const std::string& out_dir, double from, double to, double step, int seeds) {
  const vsl::LoadedConfig loaded = vsl::load_scenario_config(config_path);
  if (!(step > 0.0) || to < from) throw vsl::ConfigError("need a positive step and to >= from");

  std::vector<double> values;
  for (double v = from; v <= to + 0.5 * step; v += step) values.push_back(v);

  std::vector<vsl::SweepPoint> points;
  std::string x_label, y_label;
  if (kind == "xi") {
    points = vsl::sweep_target_bias(loaded.scenario, values);
    x_label = "xi";
    y_label = "late mean discharge [veh/s]";
  } else if (kind == "delta") {
    points = vsl::sweep_capacity_drop(loaded.scenario, values, seeds);
    x_label = "capacity drop";
    y_label = "travel-time reduction ratio";
  } else {
    throw vsl::ConfigError("sweep kind must be 'xi' or 'delta'");
  }

  fs::create_directories(out_dir);
  std::string csv = x_label + ",result\n";
  for (const auto& p : points) {
    csv += vsl::format_double(p.parameter) + "," + vsl::format_double(p.result) + "\n";
    std::cout << p.parameter << "  ->  " << p.result << "\n";
  }
  vsl::write_file_atomic(fs::path(out_dir) / ("sweep_" + kind + ".csv"), csv);
  vsl::write_curve_svg(fs::path(out_dir) / ("sweep_" + kind + ".svg"), points, x_label,
                       y_label);
  return 0;
}

int run_compare(const std::string& vsl_path, const std::string& base_path,
                const std::optional<std::uint64_t>& seed, const std::string& out_dir) {
  const auto with_vsl = load_with_overrides(vsl_path, seed, std::nullopt);
  const auto baseline = load_with_overrides(base_path, seed, std::nullopt);

  const auto trace_vsl = vsl::run_scenario(with_vsl.scenario);
  const auto trace_base = vsl::run_scenario(baseline.scenario);
  const double reduction = vsl::reduction_ratio(trace_vsl, trace_base);

  std::cout << "travel time with control:    " << trace_vsl.summary.avg_travel_time.value()
            << " s\n"
            << "travel time without control: " << trace_base.summary.avg_travel_time.value()
            << " s\n"
            << "reduction ratio:             " << reduction << "\n";

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::string json = "{\n  \"reduction_ratio\": " + vsl::format_double(reduction) +
                       ",\n  \"travel_time_with\": " +
                       vsl::format_double(*trace_vsl.summary.avg_travel_time) +
                       ",\n  \"travel_time_without\": " +
                       vsl::format_double(*trace_base.summary.avg_travel_time) +
                       ",\n  \"config_hash_with\": \"" + with_vsl.hash +
                       "\",\n  \"config_hash_without\": \"" + baseline.hash + "\"\n}\n";
    vsl::write_file_atomic(fs::path(out_dir) / "compare.json", json);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lane-drop bottleneck simulation and speed-limit control toolkit"};
  app.set_version_flag("--version", vsl::kVersion);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run a configured scenario");
  simulate->add_option("--config", sim.config_path, "scenario config (JSON)")->required();
  simulate->add_option("--out", sim.out_dir, "output directory");
  simulate->add_option("--seed", sim.seed, "override the arrival seed");
  simulate->add_option("--window-frac", sim.window_frac,
                       "late-window fraction for summary metrics");
  simulate->add_flag("--plot", sim.plot, "write SVG plots");

  std::string eq_config;
  double eq_demand = 0.0;
  std::optional<double> eq_u_star, eq_alpha, eq_beta;
  auto* equilibria = app.add_subcommand("equilibria", "tabulate equilibrium states");
  equilibria->add_option("--demand", eq_demand, "upstream demand d- [veh/s]")->required();
  equilibria->add_option("--u-star", eq_u_star, "constant speed limit [m/s] (open loop)");
  equilibria->add_option("--alpha", eq_alpha, "proportional gain (closed loop)");
  equilibria->add_option("--beta", eq_beta, "integral gain (closed loop)");
  equilibria->add_option("--config", eq_config, "model parameters from a scenario config");

  std::string sweep_kind, sweep_config, sweep_out = "out";
  double sweep_from = 0.0, sweep_to = 0.0, sweep_step = 0.0;
  int sweep_seeds = 10;
  auto* sweep = app.add_subcommand("sweep", "sweep xi or the capacity drop");
  sweep->add_option("--kind", sweep_kind, "xi | delta")->required();
  sweep->add_option("--config", sweep_config, "base scenario config")->required();
  sweep->add_option("--from", sweep_from, "first value")->required();
  sweep->add_option("--to", sweep_to, "last value")->required();
  sweep->add_option("--step", sweep_step, "increment")->required();
  sweep->add_option("--seeds", sweep_seeds, "seed-ensemble size for stochastic scenarios");
  sweep->add_option("--out", sweep_out, "output directory");

  std::string cmp_vsl, cmp_base, cmp_out;
  std::optional<std::uint64_t> cmp_seed;
  auto* compare = app.add_subcommand("compare", "reduction ratio of paired runs");
  compare->add_option("--vsl", cmp_vsl, "scenario with control")->required();
  compare->add_option("--base", cmp_base, "scenario without control")->required();
  compare->add_option("--seed", cmp_seed, "shared arrival seed override");
  compare->add_option("--out", cmp_out, "output directory for compare.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (equilibria->parsed()) {
      return run_equilibria(eq_config, eq_demand, eq_u_star, eq_alpha, eq_beta);
    }
    if (sweep->parsed()) {
      return run_sweep(sweep_kind, sweep_config, sweep_out, sweep_from, sweep_to, sweep_step,
                       sweep_seeds);
    }
    if (compare->parsed()) return run_compare(cmp_vsl, cmp_base, cmp_seed, cmp_out);
  } catch (const vsl::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const vsl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
