#include "frostgrid/plan.hpp"

#include <cmath>

#include "frostgrid/errors.hpp"
#include "frostgrid/graph.hpp"

namespace frostgrid {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Milp: return "milp";
    case Provenance::Heuristic: return "heuristic";
    case Provenance::Imported: return "imported";
    case Provenance::Oracle: return "oracle";
  }
  return "milp";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "milp") return Provenance::Milp;
  if (s == "heuristic") return Provenance::Heuristic;
  if (s == "imported") return Provenance::Imported;
  if (s == "oracle") return Provenance::Oracle;
  throw InvalidArgument("unknown plan provenance '" + s + "'");
}

double pipe_length(const DesignPlan& plan) {
  double total = 0.0;
  for (auto [a, b] : plan.pipe_edges) total += distance(plan.heaters.at(a), plan.heaters.at(b));
  return total;
}

void validate_plan_structure(const DesignPlan& plan) {
  const auto n = static_cast<int>(plan.heaters.size());
  if (n == 0) {
    if (!plan.pipe_edges.empty()) throw InvalidArgument("pipe edges without heaters");
    return;
  }
  if (static_cast<int>(plan.pipe_edges.size()) != n - 1) {
    throw InvalidArgument("pipe network must have exactly heaters - 1 edges");
  }
  DisjointSets sets(static_cast<std::size_t>(n));
  for (auto [a, b] : plan.pipe_edges) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw InvalidArgument("bad pipe edge index");
    if (!sets.unite(a, b)) throw InvalidArgument("pipe network contains a cycle");
  }
  if (plan.site_ids && plan.site_ids->size() != plan.heaters.size()) {
    throw InvalidArgument("site_ids must list one site per heater");
  }
  if (std::abs(pipe_length(plan) - plan.obj_part1_m) > 1e-9) {
    throw InvalidArgument("obj_part1_m does not match the pipe edge lengths");
  }
}

}  // namespace frostgrid
