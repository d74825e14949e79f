#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vslsim/engine.hpp"

namespace vsl {

// Dependency-free SVG renderings: polyline time-series panels and a
// cell-density contour map on a fixed 16-step color scale over [0, k_j].

void write_timeseries_panels_svg(const std::filesystem::path& path,
                                 const ScenarioTrace& trace);

void write_density_contour_svg(const std::filesystem::path& path,
                               const ScenarioTrace& trace, double jam_density,
                               double cell_length);

void write_curve_svg(const std::filesystem::path& path, const std::vector<SweepPoint>& points,
                     const std::string& x_label, const std::string& y_label);

}  // namespace vsl
