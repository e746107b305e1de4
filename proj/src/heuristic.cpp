#include "frostgrid/heuristic.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "frostgrid/errors.hpp"
#include "frostgrid/graph.hpp"

namespace frostgrid {

namespace {

constexpr double kMaxAspectDeviation = 4.0;
constexpr int kMaxPushes = 10;

double aspect_deviation(int rows, int cols, double aspect) {
  return std::abs(static_cast<double>(cols) / rows - aspect);
}

}  // namespace

PartitionScheme partition(const OrchardInstance& inst) {
  if (inst.k < 1) throw InvalidArgument("k must be at least 1");
  const int k = inst.k;
  const double aspect = inst.length_m / inst.width_m;

  int best_rows = 0;
  double best_dev = std::numeric_limits<double>::infinity();
  for (int r = 1; r <= k; ++r) {
    if (k % r != 0) continue;
    const double dev = aspect_deviation(r, k / r, aspect);
    if (dev < best_dev) {
      best_dev = dev;
      best_rows = r;
    }
  }
  int rows = best_rows;
  int cols = k / best_rows;

  if (best_dev > kMaxAspectDeviation) {
    // Minimal-excess grid among acceptable aspects; else the best aspect.
    int pick_r = 0;
    int pick_c = 0;
    long pick_excess = std::numeric_limits<long>::max();
    double pick_dev = std::numeric_limits<double>::infinity();
    bool pick_ok = false;
    for (int r = 1; r <= k; ++r) {
      const int c = (k + r - 1) / r;
      const long excess = static_cast<long>(r) * c - k;
      const double dev = aspect_deviation(r, c, aspect);
      const bool ok = dev <= kMaxAspectDeviation;
      bool take = false;
      if (ok != pick_ok) {
        take = ok;
      } else if (ok) {
        take = excess < pick_excess || (excess == pick_excess && dev < pick_dev);
      } else {
        take = dev < pick_dev || (dev == pick_dev && excess < pick_excess);
      }
      if (pick_r == 0 || take) {
        pick_r = r;
        pick_c = c;
        pick_excess = excess;
        pick_dev = dev;
        pick_ok = ok;
      }
    }
    rows = pick_r;
    cols = pick_c;
  }
  return {rows, cols, inst.length_m / cols, inst.width_m / rows};
}

std::vector<Point2D> place_heaters(const OrchardInstance& inst, const PartitionScheme& scheme) {
  if (scheme.rows < 1 || scheme.cols < 1 || scheme.rows * scheme.cols < inst.k) {
    throw InvalidArgument("partition has fewer cells than heaters");
  }
  std::vector<Point2D> out;
  out.reserve(inst.k);
  for (int t = 0; t < inst.k; ++t) {
    const int row = t / scheme.cols;
    const int col = t % scheme.cols;
    Point2D p{(col + 0.5) * scheme.cell_w, (row + 0.5) * scheme.cell_h};

    bool clear = false;
    for (int push = 0; push <= kMaxPushes; ++push) {
      const Point2D* nearest = nullptr;
      double nearest_d = std::numeric_limits<double>::infinity();
      for (const Point2D& tree : inst.trees) {
        const double d = distance(p, tree);
        if (d < inst.d_ht_m - 1e-12 && d < nearest_d) {
          nearest_d = d;
          nearest = &tree;
        }
      }
      if (!nearest) {
        clear = true;
        break;
      }
      if (push == kMaxPushes) break;
      double dx = 1.0;
      double dy = 0.0;
      if (nearest_d > 0.0) {
        dx = (p.x - nearest->x) / nearest_d;
        dy = (p.y - nearest->y) / nearest_d;
      }
      p = {nearest->x + dx * inst.d_ht_m, nearest->y + dy * inst.d_ht_m};
    }
    if (!clear) {
      throw PlacementError("heater " + std::to_string(t) + " could not be cleared from the trees in " +
                           std::to_string(kMaxPushes) + " pushes");
    }
    out.push_back(p);
  }
  return out;
}

DesignPlan heuristic_plan(const OrchardInstance& inst) {
  DesignPlan plan;
  plan.provenance = Provenance::Heuristic;
  plan.alpha = inst.alpha;
  plan.heaters = place_heaters(inst, partition(inst));
  const TreeSolution mst = kruskal_mst(complete_graph(plan.heaters));
  plan.pipe_edges = mst.edges;
  plan.obj_part1_m = pipe_length(plan);
  return plan;
}

std::vector<int> snap_to_sites(const OrchardInstance& inst, std::span<const Point2D> points) {
  if (points.size() > inst.site_count()) throw InvalidArgument("more points than candidate sites");
  std::vector<char> taken(inst.site_count(), 0);
  std::vector<int> out;
  out.reserve(points.size());
  for (Point2D p : points) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < inst.site_count(); ++i) {
      if (taken[i]) continue;
      const double d = distance(p, inst.candidate_sites[i]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    taken[best] = 1;
    out.push_back(best);
  }
  return out;
}

}  // namespace frostgrid
