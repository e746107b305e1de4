#include "frostgrid/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "frostgrid/errors.hpp"

namespace frostgrid {

namespace {

constexpr int kLegendBand = 60;  // px reserved under the orchard
constexpr double kOutsideTol = 1e-9;

// Fixed two-decimal pixel coordinates keep the bytes stable.
std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

struct Frame {
  double scale;
  double ox;
  double oy;
  double width_m;
  double height_m;

  // SVG y grows downwards; orchard y grows upwards.
  double x(double m) const { return ox + m * scale; }
  double y(double m) const { return oy + (height_m - m) * scale; }
};

double nice_length(double max_m) {
  // Largest 1/2/5 x 10^e not above max_m.
  const double e = std::pow(10.0, std::floor(std::log10(max_m)));
  for (double f : {5.0, 2.0, 1.0}) {
    if (f * e <= max_m) return f * e;
  }
  return e;
}

}  // namespace

void RenderSpec::validate() const {
  if (canvas_width_px <= 0 || canvas_height_px <= 0) throw RenderError("canvas dimensions must be positive");
  if (margin_px < 0) throw RenderError("margin must be non-negative");
  if (canvas_width_px - 2 * margin_px <= 0 || canvas_height_px - 2 * margin_px - kLegendBand <= 0) {
    throw RenderError("canvas too small for margins and legend");
  }
}

std::string render_svg(const OrchardInstance& inst, const DesignPlan& plan, const RenderSpec& spec) {
  spec.validate();
  if (!(inst.length_m > 0.0) || !(inst.width_m > 0.0)) throw RenderError("orchard dimensions must be positive");
  for (std::size_t i = 0; i < plan.heaters.size(); ++i) {
    const Point2D h = plan.heaters[i];
    if (!is_finite(h) || h.x < -kOutsideTol || h.y < -kOutsideTol || h.x > inst.length_m + kOutsideTol ||
        h.y > inst.width_m + kOutsideTol) {
      throw RenderError("heater " + std::to_string(i) + " lies outside the orchard; plan and instance do not match");
    }
  }
  for (auto [a, b] : plan.pipe_edges) {
    const auto n = static_cast<int>(plan.heaters.size());
    if (a < 0 || b < 0 || a >= n || b >= n) throw RenderError("pipe edge refers to a missing heater");
  }

  const double avail_w = spec.canvas_width_px - 2.0 * spec.margin_px;
  const double avail_h = spec.canvas_height_px - 2.0 * spec.margin_px - kLegendBand;
  const double scale = std::min(avail_w / inst.length_m, avail_h / inst.width_m);
  const Frame f{scale, spec.margin_px + (avail_w - inst.length_m * scale) / 2.0,
                spec.margin_px + (avail_h - inst.width_m * scale) / 2.0, inst.length_m, inst.width_m};

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.canvas_width_px
     << "\" height=\"" << spec.canvas_height_px << "\" viewBox=\"0 0 " << spec.canvas_width_px << ' '
     << spec.canvas_height_px << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << spec.canvas_width_px << "\" height=\"" << spec.canvas_height_px
     << "\" fill=\"white\"/>\n";
  os << "<rect id=\"orchard\" x=\"" << px(f.x(0)) << "\" y=\"" << px(f.y(inst.width_m)) << "\" width=\""
     << px(inst.length_m * scale) << "\" height=\"" << px(inst.width_m * scale)
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  const double r_tree = std::max(2.0, 1.0 * scale);  // ~1 m canopy
  if (spec.layers.trees) {
    os << "<g id=\"trees\" fill=\"#6aa84f\" stroke=\"#38761d\" stroke-width=\"0.5\">\n";
    for (Point2D t : inst.trees) {
      os << "<circle cx=\"" << px(f.x(t.x)) << "\" cy=\"" << px(f.y(t.y)) << "\" r=\"" << px(r_tree) << "\"/>\n";
    }
    os << "</g>\n";
  }
  if (spec.layers.candidate_sites) {
    os << "<g id=\"candidate_sites\" fill=\"#999999\">\n";
    for (Point2D s : inst.candidate_sites) {
      os << "<rect x=\"" << px(f.x(s.x) - 1.5) << "\" y=\"" << px(f.y(s.y) - 1.5)
         << "\" width=\"3.00\" height=\"3.00\"/>\n";
    }
    os << "</g>\n";
  }
  if (spec.layers.check_points) {
    os << "<g id=\"check_points\" stroke=\"#cc0000\" stroke-width=\"0.8\">\n";
    for (Point2D c : inst.check_points) {
      const double cx = f.x(c.x);
      const double cy = f.y(c.y);
      os << "<path d=\"M" << px(cx - 2.5) << ' ' << px(cy - 2.5) << "L" << px(cx + 2.5) << ' ' << px(cy + 2.5)
         << "M" << px(cx - 2.5) << ' ' << px(cy + 2.5) << "L" << px(cx + 2.5) << ' ' << px(cy - 2.5)
         << "\"/>\n";
    }
    os << "</g>\n";
  }
  if (spec.layers.pipes && !plan.pipe_edges.empty()) {
    os << "<g id=\"pipes\" stroke=\"#1f4e79\" stroke-width=\"2\">\n";
    for (auto [a, b] : plan.pipe_edges) {
      const Point2D p = plan.heaters[a];
      const Point2D q = plan.heaters[b];
      os << "<line x1=\"" << px(f.x(p.x)) << "\" y1=\"" << px(f.y(p.y)) << "\" x2=\"" << px(f.x(q.x))
         << "\" y2=\"" << px(f.y(q.y)) << "\"/>\n";
    }
    os << "</g>\n";
  }
  if (spec.layers.heaters && !plan.heaters.empty()) {
    os << "<g id=\"heaters\" fill=\"#e69138\" stroke=\"black\" stroke-width=\"0.8\">\n";
    for (Point2D h : plan.heaters) {
      os << "<circle cx=\"" << px(f.x(h.x)) << "\" cy=\"" << px(f.y(h.y)) << "\" r=\"5.00\"/>\n";
    }
    os << "</g>\n";
  }

  // Legend and scale bar share the band below the orchard.
  const double ly = spec.canvas_height_px - spec.margin_px - kLegendBand + 25.0;
  double lx = spec.margin_px;
  os << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
  auto entry = [&](const std::string& marker, const char* label) {
    os << marker << "<text x=\"" << px(lx + 10) << "\" y=\"" << px(ly + 4) << "\">" << label << "</text>\n";
    lx += 110.0;
  };
  entry("<circle cx=\"" + px(lx) + "\" cy=\"" + px(ly) + "\" r=\"4.00\" fill=\"#6aa84f\" stroke=\"#38761d\"/>",
        "tree");
  entry("<rect x=\"" + px(lx - 1.5) + "\" y=\"" + px(ly - 1.5) + "\" width=\"3.00\" height=\"3.00\" fill=\"#999999\"/>",
        "candidate site");
  entry("<path d=\"M" + px(lx - 2.5) + ' ' + px(ly - 2.5) + "L" + px(lx + 2.5) + ' ' + px(ly + 2.5) + "M" +
            px(lx - 2.5) + ' ' + px(ly + 2.5) + "L" + px(lx + 2.5) + ' ' + px(ly - 2.5) +
            "\" stroke=\"#cc0000\" stroke-width=\"0.8\"/>",
        "check point");
  entry("<circle cx=\"" + px(lx) + "\" cy=\"" + px(ly) + "\" r=\"5.00\" fill=\"#e69138\" stroke=\"black\"/>",
        "heater");
  entry("<line x1=\"" + px(lx - 6) + "\" y1=\"" + px(ly) + "\" x2=\"" + px(lx + 6) + "\" y2=\"" + px(ly) +
            "\" stroke=\"#1f4e79\" stroke-width=\"2\"/>",
        "pipe");
  os << "</g>\n";

  const double bar_m = nice_length(inst.length_m / 4.0);
  const double bar_px = bar_m * scale;
  const double bx = spec.canvas_width_px - spec.margin_px - bar_px;
  const double by = ly + 22.0;
  char label[64];
  std::snprintf(label, sizeof label, "%g m", bar_m);
  os << "<g id=\"scale_bar\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<line x1=\"" << px(bx) << "\" y1=\"" << px(by) << "\" x2=\"" << px(bx + bar_px) << "\" y2=\"" << px(by)
     << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  os << "<text x=\"" << px(bx) << "\" y=\"" << px(by - 5) << "\">" << label << "</text>\n";
  os << "</g>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace frostgrid
