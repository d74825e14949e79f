#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "vslsim/engine.hpp"

namespace vsl {

// Columns: t,k_obs,u,f,g,lambda,d_minus,r[,rho_1..rho_n]. Numbers use the
// shortest representation that round-trips the double exactly.
void write_trace_csv(const std::filesystem::path& path, const ScenarioTrace& trace);

// Reads steps (and cell densities, when present) back; summary is not stored.
ScenarioTrace read_trace_csv(const std::filesystem::path& path);

struct RunMetadata {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string trace_path;
};

void write_summary_json(const std::filesystem::path& path, const TraceSummary& summary,
                        const RunMetadata& meta);

// Writes content to path atomically (temp file in the same directory + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// FNV-1a over a canonical string; used to fingerprint configs in summaries.
std::string fnv1a_hex(const std::string& text);

std::string format_double(double value);  // shortest round-trip decimal

}  // namespace vsl
