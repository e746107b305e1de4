#include "frostgrid/instance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "frostgrid/errors.hpp"
#include "frostgrid/kernels.hpp"

namespace frostgrid {

namespace {

constexpr double kGridEps = 1e-9;

// Axis coordinates start, start + step, ... up to and including `limit`.
std::vector<double> axis(double start, double step, double limit) {
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = start + step * i;
    if (v > limit + kGridEps) break;
    out.push_back(v);
  }
  return out;
}

std::vector<Point2D> grid(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<Point2D> pts;
  pts.reserve(xs.size() * ys.size());
  for (double y : ys) {
    for (double x : xs) pts.push_back({x, y});
  }
  return pts;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace

double influence(Point2D source, Point2D target, double k_tun) {
  if (!is_finite(source) || !is_finite(target)) {
    throw InvalidArgument("influence: non-finite coordinate");
  }
  if (!(k_tun > 0.0) || !std::isfinite(k_tun)) {
    throw InvalidArgument("influence: k_tun must be positive and finite");
  }
  return std::exp(-k_tun * distance(source, target));
}

double OrchardInstance::ku_lo_min() const {
  return ku_lo.empty() ? 0.0 : *std::min_element(ku_lo.begin(), ku_lo.end());
}

double OrchardInstance::ku_hi_max() const {
  return ku_hi.empty() ? 0.0 : *std::max_element(ku_hi.begin(), ku_hi.end());
}

void OrchardInstance::validate() const {
  require(length_m > 0.0 && std::isfinite(length_m), "length_m must be positive");
  require(width_m > 0.0 && std::isfinite(width_m), "width_m must be positive");
  require(d_ht_m >= 0.0, "d_ht_m must be non-negative");
  require(f_lo >= 0.0 && f_lo <= f_hi, "need 0 <= f_lo <= f_hi");
  require(k_tun > 0.0 && std::isfinite(k_tun), "k_tun must be positive");
  require(alpha >= 0.0 && std::isfinite(alpha), "alpha must be non-negative");
  require(beta1_nor > 0.0 && beta2_nor > 0.0, "normalization parameters must be positive");
  require(k >= 1, "k must be at least 1");

  auto inside = [&](Point2D p) {
    return is_finite(p) && p.x >= -kGridEps && p.x <= length_m + kGridEps && p.y >= -kGridEps &&
           p.y <= width_m + kGridEps;
  };
  for (const auto* set : {&trees, &candidate_sites, &check_points}) {
    for (Point2D p : *set) {
      require(inside(p), "point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                             ") lies outside the orchard");
    }
  }
  for (std::size_t i = 0; i < candidate_sites.size(); ++i) {
    for (Point2D t : trees) {
      require(distance(candidate_sites[i], t) >= d_ht_m - kGridEps,
              "candidate site " + std::to_string(i) + " violates tree clearance");
    }
  }
  require(ku_lo.size() == candidate_sites.size() && ku_hi.size() == candidate_sites.size(),
          "ku_lo/ku_hi need one entry per candidate site");
  for (std::size_t i = 0; i < ku_lo.size(); ++i) {
    require(ku_lo[i] > 0.0 && ku_lo[i] <= ku_hi[i], "need 0 < ku_lo <= ku_hi at every site");
  }
  if (candidate_sites.empty()) throw InfeasibleInstance("instance has no candidate sites");
  if (static_cast<std::size_t>(k) > candidate_sites.size()) {
    throw InfeasibleInstance("k = " + std::to_string(k) + " exceeds the " +
                             std::to_string(candidate_sites.size()) + " candidate sites");
  }
}

void HeatModel::validate() const {
  require(p0_watts > 0.0 && std::isfinite(p0_watts), "p0_watts must be positive");
  require(k_tun > 0.0 && std::isfinite(k_tun), "k_tun must be positive");
}

double HeatModel::power_at(Point2D source, Point2D target, double ku) const {
  return p0_watts * ku * influence(source, target, k_tun);
}

OrchardInstance generate_instance(const GridParams& p) {
  require(p.length_m > 0.0 && p.width_m > 0.0, "orchard dimensions must be positive");
  require(p.tree_spacing_m > 0.0 && p.site_spacing_m > 0.0 && p.cp_spacing_m > 0.0,
          "grid spacings must be positive");
  require(p.d_ht_m >= 0.0, "d_ht must be non-negative");
  require(p.ku_lo > 0.0 && p.ku_lo <= p.ku_hi, "need 0 < ku_lo <= ku_hi");

  OrchardInstance inst;
  inst.length_m = p.length_m;
  inst.width_m = p.width_m;

  // Trees sit on cell centers of a tree_spacing grid.
  const double t0 = p.tree_spacing_m / 2.0;
  const auto tree_xs = axis(t0, p.tree_spacing_m, p.length_m - t0);
  const auto tree_ys = axis(t0, p.tree_spacing_m, p.width_m - t0);
  inst.trees = grid(tree_xs, tree_ys);

  // Candidate sites: offset half a site step from the first tree row/column and
  // kept within the tree grid's bounding box, then filtered by clearance.
  if (!tree_xs.empty() && !tree_ys.empty()) {
    const double s0 = p.site_spacing_m / 2.0;
    const auto site_xs = axis(tree_xs.front() + s0, p.site_spacing_m, tree_xs.back());
    const auto site_ys = axis(tree_ys.front() + s0, p.site_spacing_m, tree_ys.back());
    for (Point2D c : grid(site_xs, site_ys)) {
      const bool clear = std::all_of(inst.trees.begin(), inst.trees.end(), [&](Point2D t) {
        return distance(c, t) >= p.d_ht_m;
      });
      if (clear) inst.candidate_sites.push_back(c);
    }
  }
  if (inst.candidate_sites.empty()) {
    throw InfeasibleInstance("no candidate heater site survives the tree-clearance filter");
  }

  const double c0 = p.cp_spacing_m / 2.0;
  inst.check_points =
      grid(axis(c0, p.cp_spacing_m, p.length_m - c0), axis(c0, p.cp_spacing_m, p.width_m - c0));

  inst.k = p.k;
  inst.d_ht_m = p.d_ht_m;
  inst.f_lo = p.f_lo;
  inst.f_hi = p.f_hi;
  inst.k_tun = p.k_tun;
  inst.ku_lo.assign(inst.candidate_sites.size(), p.ku_lo);
  inst.ku_hi.assign(inst.candidate_sites.size(), p.ku_hi);
  inst.alpha = p.alpha;
  inst.beta1_nor = p.beta1_nor;
  inst.beta2_nor = p.beta2_nor;
  inst.validate();
  return inst;
}

InfluenceMatrix::InfluenceMatrix(std::size_t sites, std::size_t check_points,
                                 std::vector<double> values)
    : rows_(sites), cols_(check_points), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) throw InvalidArgument("influence matrix size mismatch");
}

InfluenceMatrix build_influence_matrix(const OrchardInstance& inst, Execution exec) {
  if (!(inst.k_tun > 0.0)) throw InvalidArgument("k_tun must be positive");
  std::vector<double> values(inst.site_count() * inst.cp_count());
  if (exec == Execution::Parallel) {
    kernels::influence_matrix_omp(inst.candidate_sites, inst.check_points, inst.k_tun, values);
  } else {
    kernels::influence_matrix_serial(inst.candidate_sites, inst.check_points, inst.k_tun, values);
  }
  return {inst.site_count(), inst.cp_count(), std::move(values)};
}

}  // namespace frostgrid
