#pragma once

#include <string>

#include "frostgrid/instance.hpp"
#include "frostgrid/plan.hpp"

namespace frostgrid {

struct RenderLayers {
  bool trees = true;
  bool candidate_sites = true;
  bool check_points = true;
  bool heaters = true;
  bool pipes = true;
};

/// Canvas size in pixels; the orchard is scaled uniformly to fit inside the
/// margins and the legend band, and centered.
struct RenderSpec {
  int canvas_width_px = 900;
  int canvas_height_px = 700;
  int margin_px = 40;
  RenderLayers layers;

  void validate() const;
};

/// SVG 1.1 document for the orchard and, when non-empty, a plan drawn on top.
/// Output bytes depend only on the inputs. Throws RenderError if a heater
/// lies outside the orchard.
std::string render_svg(const OrchardInstance& inst, const DesignPlan& plan, const RenderSpec& spec = {});

}  // namespace frostgrid
