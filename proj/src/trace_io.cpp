#include "vslsim/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "vslsim/errors.hpp"
#include "vslsim/version.hpp"

namespace vsl {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view token, const char* context) {
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw ConfigError(std::string("bad number in ") + context + ": '" +
                      std::string(token) + "'");
  }
  return value;
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw ConfigError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_trace_csv(const std::filesystem::path& path, const ScenarioTrace& trace) {
  std::ostringstream out;
  out << "t,k_obs,u,f,g,lambda,d_minus,r";
  const std::size_t cells = trace.fields.empty() ? 0 : trace.fields.front().size();
  for (std::size_t i = 1; i <= cells; ++i) out << ",rho_" << i;
  out << '\n';

  for (std::size_t j = 0; j < trace.steps.size(); ++j) {
    const StepRecord& rec = trace.steps[j];
    out << format_double(rec.t) << ',' << format_double(rec.k_obs) << ','
        << format_double(rec.u) << ',' << format_double(rec.f) << ','
        << format_double(rec.g) << ',' << format_double(rec.lambda) << ','
        << format_double(rec.d_minus) << ',' << format_double(rec.r);
    if (cells > 0) {
      for (double rho : trace.fields[j]) out << ',' << format_double(rho);
    }
    out << '\n';
  }
  write_file_atomic(path, out.str());
}

ScenarioTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty trace file " + path.string());
  std::size_t columns = 1;
  for (char c : line) columns += c == ',' ? 1 : 0;
  if (columns < 8) throw ConfigError("unexpected trace header in " + path.string());
  const std::size_t cells = columns - 8;

  ScenarioTrace trace;
  std::vector<std::string_view> tokens;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    tokens.clear();
    std::string_view view = line;
    while (true) {
      const auto comma = view.find(',');
      tokens.push_back(view.substr(0, comma));
      if (comma == std::string_view::npos) break;
      view.remove_prefix(comma + 1);
    }
    if (tokens.size() != columns) {
      throw ConfigError("ragged row in " + path.string());
    }
    StepRecord rec{};
    rec.t = parse_double(tokens[0], "t");
    rec.k_obs = parse_double(tokens[1], "k_obs");
    rec.u = parse_double(tokens[2], "u");
    rec.f = parse_double(tokens[3], "f");
    rec.g = parse_double(tokens[4], "g");
    rec.lambda = parse_double(tokens[5], "lambda");
    rec.d_minus = parse_double(tokens[6], "d_minus");
    rec.r = parse_double(tokens[7], "r");
    trace.steps.push_back(rec);
    if (cells > 0) {
      std::vector<double> field;
      field.reserve(cells);
      for (std::size_t i = 0; i < cells; ++i) {
        field.push_back(parse_double(tokens[8 + i], "rho"));
      }
      trace.fields.push_back(std::move(field));
    }
  }
  if (trace.steps.size() >= 2) trace.dt = trace.steps[1].t - trace.steps[0].t;
  return trace;
}

void write_summary_json(const std::filesystem::path& path, const TraceSummary& summary,
                        const RunMetadata& meta) {
  nlohmann::json j;
  j["schema_version"] = kSummarySchemaVersion;
  j["code_version"] = kVersion;
  j["config_hash"] = meta.config_hash;
  j["seed"] = meta.seed;
  if (!meta.trace_path.empty()) j["trace_path"] = meta.trace_path;

  j["total_arrivals"] = summary.total_arrivals;
  j["total_departures"] = summary.total_departures;
  if (summary.avg_travel_time) {
    j["avg_travel_time"] = *summary.avg_travel_time;
  } else {
    j["avg_travel_time"] = nullptr;
  }
  j["travel_time_formula"] = kTravelTimeFormula;
  j["window_frac"] = summary.window_frac;
  j["late_mean_g"] = summary.late_mean_g;
  j["late_min_g"] = summary.late_min_g;
  j["late_max_g"] = summary.late_max_g;
  j["late_mean_k_obs"] = summary.late_mean_k_obs;
  j["late_max_abs_target_err"] = summary.late_max_abs_target_err;
  j["late_drop_steps"] = summary.late_drop_steps;
  j["late_steps"] = summary.late_steps;
  j["drop_steps"] = summary.drop_steps;
  j["clamp_events"] = summary.clamp_events;
  j["max_conservation_residual"] = summary.max_conservation_residual;
  j["final_k_obs"] = summary.final_k_obs;
  j["target_density"] = summary.target_density;

  write_file_atomic(path, j.dump(2) + "\n");
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[hash & 0xF];
    hash >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

}  // namespace vsl
