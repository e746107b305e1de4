#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frostgrid/geometry.hpp"

namespace frostgrid {

enum class Provenance { Milp, Heuristic, Imported, Oracle };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// A heater layout with its pipe tree and objective decomposition.
///
/// obj_part1_m is the total pipe length; obj_part2 is the average range
/// violation over check points (the MILP objective uses the un-averaged sum,
/// i.e. n_cp * obj_part2).
struct DesignPlan {
  std::vector<Point2D> heaters;
  std::optional<std::vector<int>> site_ids;
  std::vector<std::pair<int, int>> pipe_edges;  // indices into heaters
  double obj_part1_m = 0.0;
  std::optional<double> obj_part2;
  double alpha = 0.0;
  Provenance provenance = Provenance::Milp;
};

/// Sum of Euclidean pipe-edge lengths.
double pipe_length(const DesignPlan& plan);

/// Throws InvalidArgument unless pipe_edges form a spanning tree over heaters
/// and obj_part1_m matches the edge lengths within 1e-9.
void validate_plan_structure(const DesignPlan& plan);

}  // namespace frostgrid
