#pragma once

#include <span>
#include <vector>

#include "frostgrid/instance.hpp"
#include "frostgrid/plan.hpp"

namespace frostgrid {

/// Equal-area grid of rows x cols cells over the orchard.
struct PartitionScheme {
  int rows = 1;
  int cols = 1;
  double cell_w = 0.0;  // length / cols
  double cell_h = 0.0;  // width / rows
};

/// Picks rows x cols = k whose aspect best matches the orchard. When no exact
/// factorization is within 4 of the orchard aspect ratio, the smallest grid
/// with rows x cols >= k is used instead and only its first k cells (row-major)
/// receive heaters.
PartitionScheme partition(const OrchardInstance& inst);

/// Cell centers, each pushed away from any tree closer than d_ht along the
/// tree->center ray (+x when coincident). Throws PlacementError if a point is
/// still too close after 10 pushes.
std::vector<Point2D> place_heaters(const OrchardInstance& inst, const PartitionScheme& scheme);

/// Two-stage baseline: placed heaters joined by their Kruskal MST.
DesignPlan heuristic_plan(const OrchardInstance& inst);

/// Nearest distinct candidate site for each point, assigned in input order
/// (ties go to the lower site id).
std::vector<int> snap_to_sites(const OrchardInstance& inst, std::span<const Point2D> points);

}  // namespace frostgrid
