#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "frostgrid/geometry.hpp"

namespace frostgrid {

enum class Execution { Serial, Parallel };

/// Generator inputs. Defaults reproduce the reference 180 m x 120 m orchard.
struct GridParams {
  double length_m = 180.0;
  double width_m = 120.0;
  double tree_spacing_m = 10.0;
  double site_spacing_m = 10.0;
  double cp_spacing_m = 10.0;
  int k = 21;
  double d_ht_m = 3.0;
  double f_lo = 0.5;
  double f_hi = 1.0;
  double ku_lo = 0.8;
  double ku_hi = 1.0;
  double k_tun = 0.01;
  double alpha = 5.0;
  double beta1_nor = 600.0;
  double beta2_nor = 240.0;
};

/// Orchard geometry plus every optimization parameter the design model needs.
///
/// Invariants (checked by validate()):
///   - all points lie in [0, length] x [0, width]
///   - every candidate site is at least d_ht_m from every tree root
///   - 1 <= k <= candidate_sites.size()
///   - ku_lo / ku_hi have one entry per candidate site, 0 < lo <= hi
struct OrchardInstance {
  double length_m = 0.0;
  double width_m = 0.0;
  std::vector<Point2D> trees;
  std::vector<Point2D> candidate_sites;
  std::vector<Point2D> check_points;
  int k = 1;
  double d_ht_m = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
  double k_tun = 0.0;
  std::vector<double> ku_lo;
  std::vector<double> ku_hi;
  double alpha = 0.0;
  double beta1_nor = 1.0;
  double beta2_nor = 1.0;

  std::size_t site_count() const { return candidate_sites.size(); }
  std::size_t cp_count() const { return check_points.size(); }

  /// Smallest lower and largest upper uncertainty bound over all sites; used
  /// for heaters that are not on the candidate grid.
  double ku_lo_min() const;
  double ku_hi_max() const;

  /// Throws InvalidArgument (or InfeasibleInstance for k/site mismatches).
  void validate() const;
};

/// Maximum heater power and the spatial decay rate. P0 only scales reported
/// absolute power; all constraints work in power fractions.
struct HeatModel {
  double p0_watts = 1.0;
  double k_tun = 0.01;

  void validate() const;
  /// Absolute power delivered at `target` by a heater at `source` with factor ku.
  double power_at(Point2D source, Point2D target, double ku) const;
};

/// Fraction of a heater's power reaching `target`: exp(-k_tun * |source - target|).
double influence(Point2D source, Point2D target, double k_tun);

OrchardInstance generate_instance(const GridParams& params);

/// Dense sites x check-points matrix of influence values, row-major.
class InfluenceMatrix {
 public:
  InfluenceMatrix() = default;
  InfluenceMatrix(std::size_t sites, std::size_t check_points, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t site, std::size_t cp) const { return values_[site * cols_ + cp]; }
  std::span<const double> row(std::size_t site) const {
    return {values_.data() + site * cols_, cols_};
  }
  std::span<const double> data() const { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

InfluenceMatrix build_influence_matrix(const OrchardInstance& inst,
                                       Execution exec = Execution::Parallel);

}  // namespace frostgrid
