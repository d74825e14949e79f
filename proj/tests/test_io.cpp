#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "test_common.hpp"
#include "vslsim/config.hpp"
#include "vslsim/svg.hpp"
#include "vslsim/trace_io.hpp"

using namespace vsl;
using doctest::Approx;

namespace {

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "vslsim_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("trace CSV round-trips bit-exactly") {
  ScenarioConfig config = test::stochastic_scenario(/*ctm=*/true, /*seed=*/12);
  config.horizon = 400.0;
  const auto trace = run_scenario(config);

  const auto path = temp_dir() / "trace.csv";
  write_trace_csv(path, trace);
  const auto back = read_trace_csv(path);

  REQUIRE(back.steps.size() == trace.steps.size());
  for (std::size_t j = 0; j < trace.steps.size(); ++j) {
    CHECK(back.steps[j].t == trace.steps[j].t);
    CHECK(back.steps[j].k_obs == trace.steps[j].k_obs);
    CHECK(back.steps[j].u == trace.steps[j].u);
    CHECK(back.steps[j].f == trace.steps[j].f);
    CHECK(back.steps[j].g == trace.steps[j].g);
    CHECK(back.steps[j].lambda == trace.steps[j].lambda);
    CHECK(back.steps[j].d_minus == trace.steps[j].d_minus);
    CHECK(back.steps[j].r == trace.steps[j].r);
  }
  REQUIRE(back.fields.size() == trace.fields.size());
  for (std::size_t j = 0; j < trace.fields.size(); ++j) {
    CHECK(back.fields[j] == trace.fields[j]);
  }
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}

TEST_CASE("summary json carries the metadata and metric definitions") {
  ScenarioConfig config = test::reference_scenario();
  config.horizon = 200.0;
  const auto trace = run_scenario(config);

  const auto path = temp_dir() / "summary.json";
  RunMetadata meta;
  meta.config_hash = fnv1a_hex("{}");
  meta.seed = 0;
  write_summary_json(path, trace.summary, meta);

  const std::string text = slurp(path);
  for (const char* key :
       {"schema_version", "code_version", "config_hash", "seed", "travel_time_formula",
        "window_frac", "late_mean_g", "avg_travel_time", "max_conservation_residual"}) {
    CHECK(text.find(key) != std::string::npos);
  }
}

TEST_CASE("bundled configs parse and validate") {
  const std::filesystem::path dir = VSLSIM_CONFIG_DIR;
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    ++count;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_scenario_config(entry.path()));
  }
  CHECK(count >= 10);
}

TEST_CASE("config errors name the offending key") {
  const auto dir = temp_dir();
  const auto path = dir / "broken.json";

  SUBCASE("missing key") {
    write_file_atomic(path, R"({"fd": {"v_f": 30.0, "w": 4.375}})");
    try {
      load_scenario_config(path);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("fd.k_j") != std::string::npos);
    }
  }
  SUBCASE("wrong type") {
    write_file_atomic(path, R"({"fd": {"v_f": "fast", "w": 4.375, "k_j": 0.28}})");
    try {
      load_scenario_config(path);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("fd.v_f") != std::string::npos);
    }
  }
  SUBCASE("not json") {
    write_file_atomic(path, "not json at all");
    CHECK_THROWS_AS(load_scenario_config(path), ConfigError);
  }
}

TEST_CASE("svg artifacts") {
  ScenarioConfig config = test::stochastic_scenario(/*ctm=*/true, /*seed=*/8);
  config.horizon = 600.0;
  const auto trace = run_scenario(config);
  const auto dir = temp_dir();

  write_timeseries_panels_svg(dir / "panels.svg", trace);
  write_density_contour_svg(dir / "contour.svg", trace, config.k_j, config.plant.cell_length);
  write_curve_svg(dir / "curve.svg", {{0.0, 0.0}, {0.1, 0.3}, {0.2, 0.55}}, "drop", "reduction");

  for (const char* name : {"panels.svg", "contour.svg", "curve.svg"}) {
    const std::string text = slurp(dir / name);
    CHECK(text.rfind("<svg", 0) == 0);
    CHECK(text.find("</svg>") != std::string::npos);
    CHECK(text.size() > 500);
  }
}

TEST_CASE("format_double round-trips shortest representations") {
  for (const double v : {0.1, 2.0 / 7.0, 6.0 / 11.0, 1e-300, -3.5, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}
