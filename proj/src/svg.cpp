#include "vslsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vslsim/trace_io.hpp"

namespace vsl {

namespace {

struct Rect {
  double x, y, w, h;
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

void draw_panel(std::ostringstream& out, const Rect& box, const std::string& title,
                const std::vector<double>& xs, const std::vector<double>& ys) {
  double x_min = xs.front(), x_max = xs.back();
  double y_min = ys.front(), y_max = ys.front();
  for (double y : ys) {
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  if (x_max <= x_min) x_max = x_min + 1.0;
  if (y_max <= y_min) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  const double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;

  out << "<rect x='" << num(box.x) << "' y='" << num(box.y) << "' width='" << num(box.w)
      << "' height='" << num(box.h) << "' fill='white' stroke='#444'/>\n";
  out << "<text x='" << num(box.x + 4) << "' y='" << num(box.y - 6)
      << "' font-size='13' font-family='sans-serif'>" << title << "</text>\n";
  out << "<text x='" << num(box.x) << "' y='" << num(box.y + box.h + 14)
      << "' font-size='10' font-family='sans-serif'>" << num(x_min) << "</text>\n";
  out << "<text x='" << num(box.x + box.w - 30) << "' y='" << num(box.y + box.h + 14)
      << "' font-size='10' font-family='sans-serif'>" << num(x_max) << "</text>\n";
  out << "<text x='" << num(box.x + 4) << "' y='" << num(box.y + 12)
      << "' font-size='10' font-family='sans-serif' fill='#666'>" << num(y_max) << "</text>\n";
  out << "<text x='" << num(box.x + 4) << "' y='" << num(box.y + box.h - 4)
      << "' font-size='10' font-family='sans-serif' fill='#666'>" << num(y_min) << "</text>\n";

  // Keep polylines below ~2000 points.
  const std::size_t stride = std::max<std::size_t>(1, xs.size() / 2000);
  out << "<polyline fill='none' stroke='#0057b8' stroke-width='1.2' points='";
  for (std::size_t i = 0; i < xs.size(); i += stride) {
    const double px = box.x + (xs[i] - x_min) / (x_max - x_min) * box.w;
    const double py = box.y + box.h - (ys[i] - y_min) / (y_max - y_min) * box.h;
    out << num(px) << ',' << num(py) << ' ';
  }
  out << "'/>\n";
}

// 16-step blue -> green -> yellow -> red scale.
const char* kPalette[16] = {
    "#10306e", "#174a94", "#1f66b4", "#2b84c4", "#3fa0bf", "#58b6a6", "#76c787", "#98d36a",
    "#bcdb52", "#ddd93f", "#f3c832", "#fba529", "#fb7b21", "#ef511b", "#d62f16", "#b01111"};

}  // namespace

void write_timeseries_panels_svg(const std::filesystem::path& path,
                                 const ScenarioTrace& trace) {
  const std::size_t n = trace.steps.size();
  std::vector<double> t(n), r(n), lambda(n), f(n), g(n), k(n), u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const StepRecord& rec = trace.steps[i];
    t[i] = rec.t;
    r[i] = rec.r;
    lambda[i] = rec.lambda;
    f[i] = rec.f;
    g[i] = rec.g;
    k[i] = rec.k_obs;
    u[i] = rec.u;
  }

  const double panel_w = 420, panel_h = 220, margin = 50, gap = 50;
  const double width = margin * 2 + panel_w * 2 + gap;
  const double height = margin * 2 + panel_h * 3 + gap * 2;

  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << num(width) << "' height='"
      << num(height) << "'>\n<rect width='100%' height='100%' fill='white'/>\n";

  struct Panel {
    const char* title;
    const std::vector<double>* ys;
  };
  const Panel panels[6] = {{"arrival rate r(t) [veh/s]", &r},
                           {"queue size [veh]", &lambda},
                           {"in-flux f(t) [veh/s]", &f},
                           {"discharge g(t) [veh/s]", &g},
                           {"observed density [veh/m]", &k},
                           {"speed limit u(t) [m/s]", &u}};
  for (int i = 0; i < 6; ++i) {
    const double x = margin + (i % 2) * (panel_w + gap);
    const double y = margin + (i / 2) * (panel_h + gap);
    draw_panel(out, {x, y, panel_w, panel_h}, panels[i].title, t, *panels[i].ys);
  }
  out << "</svg>\n";
  write_file_atomic(path, out.str());
}

void write_density_contour_svg(const std::filesystem::path& path,
                               const ScenarioTrace& trace, double jam_density,
                               double cell_length) {
  if (trace.fields.empty()) throw ConfigError("contour plot needs cell densities");
  const std::size_t steps = trace.fields.size();
  const std::size_t cells = trace.fields.front().size();
  const std::size_t stride = std::max<std::size_t>(1, steps / 800);
  const std::size_t columns = (steps + stride - 1) / stride;

  const double margin = 60, plot_w = 840, plot_h = 420;
  const double cw = plot_w / static_cast<double>(columns);
  const double ch = plot_h / static_cast<double>(cells);

  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << num(plot_w + 2 * margin)
      << "' height='" << num(plot_h + 2 * margin) << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << num(margin) << "' y='" << num(margin - 14)
      << "' font-size='13' font-family='sans-serif'>density [veh/m], 16 steps over [0, "
      << num(jam_density) << "]</text>\n";

  for (std::size_t col = 0; col < columns; ++col) {
    const std::size_t j = col * stride;
    const auto& field = trace.fields[j];
    for (std::size_t i = 0; i < cells; ++i) {
      int level = static_cast<int>(field[i] / jam_density * 16.0);
      level = std::clamp(level, 0, 15);
      // Position increases downstream; draw the outlet at the top.
      const double x = margin + static_cast<double>(col) * cw;
      const double y = margin + static_cast<double>(cells - 1 - i) * ch;
      out << "<rect x='" << num(x) << "' y='" << num(y) << "' width='" << num(cw + 0.5)
          << "' height='" << num(ch + 0.5) << "' fill='" << kPalette[level] << "'/>\n";
    }
  }

  const double t_end = trace.steps.empty() ? 0.0 : trace.steps.back().t + trace.dt;
  out << "<text x='" << num(margin) << "' y='" << num(margin + plot_h + 18)
      << "' font-size='11' font-family='sans-serif'>t = 0</text>\n";
  out << "<text x='" << num(margin + plot_w - 70) << "' y='" << num(margin + plot_h + 18)
      << "' font-size='11' font-family='sans-serif'>t = " << num(t_end) << " s</text>\n";
  out << "<text x='" << num(6) << "' y='" << num(margin + 10)
      << "' font-size='11' font-family='sans-serif'>x = "
      << num(static_cast<double>(cells) * cell_length) << " m</text>\n";
  out << "<text x='" << num(6) << "' y='" << num(margin + plot_h)
      << "' font-size='11' font-family='sans-serif'>x = 0</text>\n";
  out << "</svg>\n";
  write_file_atomic(path, out.str());
}

void write_curve_svg(const std::filesystem::path& path, const std::vector<SweepPoint>& points,
                     const std::string& x_label, const std::string& y_label) {
  if (points.empty()) throw ConfigError("curve plot needs at least one point");
  std::vector<double> xs, ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const auto& p : points) {
    xs.push_back(p.parameter);
    ys.push_back(p.result);
  }
  const double margin = 60, plot_w = 640, plot_h = 400;
  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << num(plot_w + 2 * margin)
      << "' height='" << num(plot_h + 2 * margin) << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n";
  draw_panel(out, {margin, margin, plot_w, plot_h}, y_label + " vs " + x_label, xs, ys);
  out << "</svg>\n";
  write_file_atomic(path, out.str());
}

}  // namespace vsl
