// Acceptance suite: end-to-end checks of the toolkit's quantitative behavior
// with the reference parameter set (v_f = 30 m/s, w = 35/8 m/s, k_j = 2/7
// veh/m, C = 6/11 veh/s, drop = 0.2, l0 = 600 m, dt = 1 s, u_min = 0.5 m/s).
// Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "vslsim/analysis.hpp"
#include "vslsim/ctm.hpp"
#include "vslsim/engine.hpp"
#include "vslsim/link_queue.hpp"
#include "vslsim/rng.hpp"

using namespace vsl;

namespace {

struct Harness {
  int failures = 0;

  void run(int index, const std::string& label, const std::function<bool(std::string&)>& fn) {
    std::string detail;
    bool ok = false;
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("%s  %2d  %s%s%s\n", ok ? "PASS" : "FAIL", index, label.c_str(),
                detail.empty() ? "" : "  -- ", detail.c_str());
    if (!ok) ++failures;
  }
};

ScenarioConfig base_scenario() {
  ScenarioConfig config;
  config.v_f = 30.0;
  config.w = 35.0 / 8.0;
  config.k_j = 2.0 / 7.0;
  config.capacity = 6.0 / 11.0;
  config.drop = 0.2;
  config.zone_length = 600.0;
  config.dt = 1.0;
  config.horizon = 8000.0;
  config.controller.u_min = 0.5;
  config.demand.kind = DemandSource::Kind::Direct;
  config.demand.direct_value = 2.0 * config.capacity;
  return config;
}

ScenarioConfig pi_scenario(double alpha, double beta) {
  ScenarioConfig config = base_scenario();
  config.controller.kind = ControllerConfig::Kind::Pi;
  config.controller.alpha = alpha;
  config.controller.beta = beta;
  config.initial_density = 2.0 / 55.0;  // 2 k_1
  return config;
}

ScenarioConfig stochastic_scenario(bool ctm) {
  ScenarioConfig config = base_scenario();
  config.demand.kind = DemandSource::Kind::Queued;
  config.demand.pattern.kind = ArrivalPattern::Kind::TrapezoidNoise;
  config.demand.pattern.peak = config.capacity;
  config.demand.pattern.ramp_rate = 5e-4;
  config.demand.pattern.fall_start = 4000.0;
  config.demand.pattern.horizon = 8000.0;
  config.demand.pattern.noise_std = std::sqrt(0.02 * config.capacity);  // variance 0.02 C
  config.demand.pattern.seed = 1;
  config.controller.kind = ControllerConfig::Kind::Pi;
  config.controller.alpha = 0.0;
  config.controller.beta = 4.0;
  if (ctm) {
    config.plant.kind = PlantConfig::Kind::Ctm;
    config.plant.cells = 20;
    config.plant.cell_length = 30.0;
  }
  return config;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

bool within(double value, double target, double rel_tol) {
  return std::abs(value - target) <= rel_tol * std::abs(target);
}

double mean(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

}  // namespace

int main() {
  Harness h;
  const FlowModel model = base_scenario().make_model();
  const DerivedConstants& dc = model.constants();
  const double c = model.bottleneck().capacity;
  const int kSeeds = 10;

  h.run(1, "open loop u = v_1: convergence to k_2 at rate w / l0", [&](std::string& detail) {
    ScenarioConfig config = base_scenario();
    config.controller.kind = ControllerConfig::Kind::Constant;
    config.controller.u_const = dc.v_1;
    config.initial_density = 2.0 * dc.k_1;
    config.horizon = 3000.0;
    const auto trace = run_scenario(config);

    const double k_final = trace.summary.final_k_obs;
    const bool converged = within(k_final, dc.k_2, 1e-3);

    // Log-error slope over the exponential tail.
    double st = 0, sy = 0, stt = 0, sty = 0;
    long n = 0;
    for (const auto& rec : trace.steps) {
      if (rec.t < 1000.0 || rec.t > 2400.0) continue;
      const double err = std::abs(rec.k_obs - dc.k_2);
      st += rec.t;
      sy += std::log(err);
      stt += rec.t * rec.t;
      sty += rec.t * std::log(err);
      ++n;
    }
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    const double expected = -model.fd().w() / 600.0;
    const bool rate_ok = within(slope, expected, 0.02);

    detail = "k(3000) = " + fmt(k_final) + " (k_2 = " + fmt(dc.k_2) +
             "), decay rate = " + fmt(-slope) + " vs w/l0 = " + fmt(-expected);
    return converged && rate_ok;
  });

  h.run(2, "I beta = 4: late mean discharge recovers C (1%)", [&](std::string& detail) {
    const auto trace = run_scenario(pi_scenario(0.0, 4.0));
    detail = "late mean g = " + fmt(trace.summary.late_mean_g) + " vs C = " + fmt(c);
    return within(trace.summary.late_mean_g, c, 0.01);
  });

  h.run(3, "I beta = 20: late mean discharge 0.7988 C (2%)", [&](std::string& detail) {
    const auto trace = run_scenario(pi_scenario(0.0, 20.0));
    detail = "late mean g = " + fmt(trace.summary.late_mean_g) + " vs 0.7988 C = " +
             fmt(0.7988 * c);
    return within(trace.summary.late_mean_g, 0.7988 * c, 0.02);
  });

  // Known red. With l0 = 600 the closed loop is overdamped for alpha >~ 392
  // (the critical gain is bounded by beta l0 / v_f = 400 for every cap slope),
  // so no limit cycle survives at alpha = 400 and the late mean lands at C.
  // The 0.9202 C target corresponds to l0 ~= 750 m; it is unreachable at 600.
  h.run(4, "PI 400/20: late mean discharge 0.9202 C (2%)", [&](std::string& detail) {
    const auto trace = run_scenario(pi_scenario(400.0, 20.0));
    detail = "late mean g = " + fmt(trace.summary.late_mean_g) + " vs 0.9202 C = " +
             fmt(0.9202 * c);
    return within(trace.summary.late_mean_g, 0.9202 * c, 0.02);
  });

  h.run(5, "PI 500/20: full discharge and density pinned at k_1", [&](std::string& detail) {
    const auto trace = run_scenario(pi_scenario(500.0, 20.0));
    detail = "late mean g = " + fmt(trace.summary.late_mean_g) +
             ", late max |k - k_1| = " + fmt(trace.summary.late_max_abs_target_err);
    return within(trace.summary.late_mean_g, c, 0.01) &&
           trace.summary.late_max_abs_target_err < 1e-4;
  });

  h.run(6, "target-density robustness and the xi discontinuity", [&](std::string& detail) {
    ScenarioConfig config = pi_scenario(0.0, 4.0);

    config.controller.xi = 0.1;
    const auto over = run_scenario(config);
    const bool over_ok = within(over.summary.late_mean_g, 0.81 * c, 0.03) &&
                         over.summary.late_max_g - over.summary.late_min_g > 0.05 * c;

    config.controller.xi = -0.1;
    const auto under = run_scenario(config);
    const bool under_ok = within(under.summary.final_k_obs, 0.9 * dc.k_1, 0.005) &&
                          within(under.summary.late_mean_g, 0.9 * c, 0.005) &&
                          under.summary.late_drop_steps == 0;

    config.controller.xi = 0.0;
    std::vector<double> xis;
    for (int i = -20; i <= 20; ++i) xis.push_back(0.01 * i);
    const auto sweep = sweep_target_bias(config, xis);
    double g_at_zero = 0.0, g_just_above = 0.0;
    for (const auto& p : sweep) {
      if (std::abs(p.parameter) < 1e-12) g_at_zero = p.result;
      if (std::abs(p.parameter - 0.01) < 1e-12) g_just_above = p.result;
    }
    const bool jump_ok = g_at_zero - g_just_above > 0.1 * c;

    detail = "xi=+0.1 mean g = " + fmt(over.summary.late_mean_g) + ", xi=-0.1 g = " +
             fmt(under.summary.late_mean_g) + ", jump at 0+ = " + fmt(g_at_zero - g_just_above);
    return over_ok && under_ok && jump_ok;
  });

  // Known red on the reduction band. Once the point queue is non-empty it
  // shields the zone from demand noise: the inflow equals the cap exactly,
  // density pins at k_1 and discharge at C, so the controlled run carries
  // only the ~60 veh frozen during the breakdown transient and averages
  // 82-85 s. The band presumes a 122 s controlled run (~twice that queue),
  // which no faithful variant of these dynamics produces. The totals part
  // of the criterion passes.
  h.run(7, "stochastic link-queue: 45-65% travel-time reduction", [&](std::string& detail) {
    const ScenarioConfig config = stochastic_scenario(false);
    const auto reductions = reduction_over_seeds(config, kSeeds);
    const double mean_reduction = mean(reductions);

    bool totals_ok = true;
    double total_min = 1e18, total_max = 0.0;
    for (int i = 0; i < kSeeds; ++i) {
      ScenarioConfig run = config;
      run.demand.pattern.seed = config.demand.pattern.seed + static_cast<std::uint64_t>(i);
      const auto trace = run_scenario(run);
      const double total = trace.summary.total_arrivals;
      total_min = std::min(total_min, total);
      total_max = std::max(total_max, total);
      totals_ok = totals_ok && total >= 2100.0 && total <= 2330.0;
    }
    detail = "mean reduction = " + fmt(mean_reduction) + ", totals in [" + fmt(total_min) +
             ", " + fmt(total_max) + "] veh";
    return mean_reduction >= 0.45 && mean_reduction <= 0.65 && totals_ok;
  });

  h.run(8, "stochastic CTM: 75-92% reduction, congestion suppressed", [&](std::string& detail) {
    const ScenarioConfig config = stochastic_scenario(true);
    const auto reductions = reduction_over_seeds(config, kSeeds);
    const double mean_reduction = mean(reductions);

    std::vector<double> baseline_tt;
    long clear_steps = 0, late_steps = 0;
    for (int i = 0; i < kSeeds; ++i) {
      ScenarioConfig with = config;
      with.demand.pattern.seed = config.demand.pattern.seed + static_cast<std::uint64_t>(i);
      ScenarioConfig without = with;
      without.controller.kind = ControllerConfig::Kind::None;

      const auto base_trace = run_scenario(without);
      baseline_tt.push_back(base_trace.summary.avg_travel_time.value_or(-1.0));

      const auto trace = run_scenario(with);
      const long n = static_cast<long>(trace.steps.size());
      const long start = n - n / 4;
      for (long j = start; j < n; ++j) {
        ++late_steps;
        if (trace.fields[static_cast<std::size_t>(j)].back() <= dc.k_1 + 1e-3) ++clear_steps;
      }
    }
    const double tt = mean(baseline_tt);
    const double clear_frac =
        static_cast<double>(clear_steps) / static_cast<double>(late_steps);

    detail = "mean reduction = " + fmt(mean_reduction) + ", no-control mean TT = " + fmt(tt) +
             " s, clear late fraction = " + fmt(clear_frac);
    return mean_reduction >= 0.75 && mean_reduction <= 0.92 && tt >= 250.0 && tt <= 340.0 &&
           clear_frac >= 0.99;
  });

  // Known red on the CTM half (the link-queue half passes). Without the
  // drop the uncontrolled CTM sits at the free-flow travel-time floor with
  // its last cell buffered slightly above k_1, which guarantees discharge C.
  // The integral term pulls that cell down to exactly k_1, so every noise
  // dip below k_1 wastes discharge (one-sided min at the kink) and queues
  // vehicles behind the limit; the ratio is also denominator-sensitive at
  // the floor. The null result genuinely holds only for the link queue,
  // whose averaged density never engages the limit.
  h.run(9, "no capacity drop, no benefit (both plants)", [&](std::string& detail) {
    ScenarioConfig lq = stochastic_scenario(false);
    lq.drop = 0.0;
    ScenarioConfig ctm = stochastic_scenario(true);
    ctm.drop = 0.0;
    const double lq_reduction = mean(reduction_over_seeds(lq, kSeeds));
    const double ctm_reduction = mean(reduction_over_seeds(ctm, kSeeds));
    detail = "|reduction| = " + fmt(std::abs(lq_reduction)) + " (link queue), " +
             fmt(std::abs(ctm_reduction)) + " (ctm)";
    return std::abs(lq_reduction) < 0.02 && std::abs(ctm_reduction) < 0.02;
  });

  h.run(10, "property suite", [&](std::string& detail) {
    std::ostringstream log;
    bool ok = true;

    // Conservation to 1e-9 on full stochastic runs of both plants.
    for (const bool ctm : {false, true}) {
      const auto trace = run_scenario(stochastic_scenario(ctm));
      if (trace.summary.max_conservation_residual >= 1e-9) {
        ok = false;
        log << "conservation residual " << trace.summary.max_conservation_residual << "; ";
      }
    }

    // One million randomized steps: density bounds, queue positivity and the
    // controller saturation invariant never break.
    {
      Rng rng(99);
      ControllerConfig pi;
      pi.kind = ControllerConfig::Kind::Pi;
      pi.alpha = 200.0;
      pi.beta = 10.0;
      pi.u_min = 0.5;
      long violations = 0;
      for (int episode = 0; episode < 600 && ok; ++episode) {
        LinkQueuePlant plant(model, 600.0, model.fd().k_j() * rng.next_double());
        PointQueue queue;
        ControllerState ctrl = controller_init(pi, model, plant.density());
        for (int j = 0; j < 1000; ++j) {
          const double r = 1.3 * model.fd().capacity() * rng.next_double();
          const double d = queue.demand(r, 1.0, model.fd().capacity());
          const auto fx = plant.step(ctrl.u, d, 1.0);
          queue.step(r, fx.f, 1.0);
          ctrl = controller_update(pi, model, ctrl, plant.density(), 1.0);
          if (plant.density() < 0.0 || plant.density() > model.fd().k_j() ||
              queue.size() < 0.0 || ctrl.u < pi.u_min || ctrl.u > model.fd().v_f()) {
            ++violations;
          }
        }
      }
      for (int episode = 0; episode < 20 && ok; ++episode) {
        std::vector<double> field(20);
        for (auto& rho : field) rho = model.fd().k_j() * rng.next_double();
        CtmPlant plant(model, field, 30.0, 1.0);
        for (int j = 0; j < 20000; ++j) {
          const double u = model.fd().v_f() * rng.next_double();
          const double d = 1.3 * model.fd().capacity() * rng.next_double();
          plant.step(u, d, 1.0);
          for (double rho : plant.densities()) {
            if (rho < 0.0 || rho > model.fd().k_j()) ++violations;
          }
        }
      }
      if (violations != 0) {
        ok = false;
        log << violations << " bound violations; ";
      }
    }

    // Equilibrium oracle agreement on 1000 random demand/limit pairs.
    {
      Rng rng(101);
      int mismatches = 0;
      int tested = 0;
      while (tested < 1000) {
        const double d = 1.3 * model.fd().capacity() * rng.next_double();
        const double u = 0.2 + (model.fd().v_f() - 0.2) * rng.next_double();
        const double inflow_sat = std::min(d, model.vsl_inflow_cap(u));
        if (std::abs(inflow_sat - model.dropped_capacity()) < 0.015 * c) continue;
        ++tested;
        const auto eqs = open_loop_equilibria(model, d, u);
        for (const double k0 : {0.5 * dc.k_1, 1.5 * dc.k_1, 1.02 * dc.k_2}) {
          LinkQueuePlant plant(model, 600.0, k0);
          double k_prev = -1.0;
          for (long j = 0; j < 60000; ++j) {
            plant.step(u, d, 1.0);
            if (j > 1000 && std::abs(plant.density() - k_prev) < 1e-15) break;
            k_prev = plant.density();
          }
          bool matched = false;
          for (const auto& eq : eqs) {
            const bool basin_ok = eq.basin == Basin::Any ||
                                  (eq.basin == Basin::AtMostK1 && k0 <= dc.k_1) ||
                                  (eq.basin == Basin::AboveK1 && k0 > dc.k_1);
            if (basin_ok && std::abs(plant.density() - eq.k_star) <= 0.005 * eq.k_star + 1e-9) {
              matched = true;
              break;
            }
          }
          if (!matched) ++mismatches;
        }
      }
      if (mismatches != 0) {
        ok = false;
        log << mismatches << " oracle mismatches; ";
      }
    }

    // The switched linearization reproduces the nonlinear rhs exactly on the
    // u = v_1 slice, across the discharge kink.
    {
      double worst = 0.0;
      for (const double alpha : {0.0, 400.0, 500.0}) {
        const auto sys = build_switched_system(model, 600.0, alpha, 20.0);
        for (int i = -20; i <= 20; ++i) {
          const double z = 0.025 * dc.k_1 * static_cast<double>(i);
          const double k = dc.k_1 + z;
          const double dk =
              (model.inflow_flux(2.0 * c, dc.v_1, k) - model.discharge_flux(k)) / 600.0;
          const double du = -alpha * dk + 20.0 * (dc.k_1 - k);
          const auto lin = sys.rhs(z, 0.0);
          worst = std::max({worst, std::abs(lin[0] - dk), std::abs(lin[1] - du) / 1e3});
        }
      }
      if (worst >= 1e-14) {
        ok = false;
        log << "switched rhs residual " << worst << "; ";
      }
    }

    // Limit-behavior classification of the two integral gains.
    {
      const double tol = 1e-6 * dc.k_1;
      const auto soft = classify_limit_behavior(
          build_switched_system(model, 600.0, 0.0, 4.0), dc.k_1, 0.0, 1.0, 8000.0, tol);
      const auto stiff = classify_limit_behavior(
          build_switched_system(model, 600.0, 0.0, 20.0), dc.k_1, 0.0, 1.0, 8000.0, tol);
      if (soft.kind != LimitBehavior::Kind::ConvergesToOrigin) {
        ok = false;
        log << "beta=4 not classified convergent; ";
      }
      if (stiff.kind != LimitBehavior::Kind::LimitCycle) {
        ok = false;
        log << "beta=20 not classified as a limit cycle; ";
      }
    }

    detail = ok ? "conservation, bounds, saturation, oracle agreement, switched-system checks"
                : log.str();
    return ok;
  });

  if (h.failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criterion(s) failed\n", h.failures);
  }
  return h.failures == 0 ? 0 : 1;
}
