#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP variant; the two must produce bit-identical results, which the unit
// tests check and bench/ compares for speed.

#include <cstdint>
#include <span>
#include <vector>

#include "frostgrid/geometry.hpp"
#include "frostgrid/instance.hpp"

namespace frostgrid::kernels {

// out[i * targets.size() + s] = exp(-k_tun * |sources[i] - targets[s]|)
void influence_matrix_serial(std::span<const Point2D> sources, std::span<const Point2D> targets,
                             double k_tun, std::span<double> out);
void influence_matrix_omp(std::span<const Point2D> sources, std::span<const Point2D> targets,
                          double k_tun, std::span<double> out);

/// Inputs for one Monte Carlo evaluation: a heaters x check-points influence
/// matrix and per-heater uncertainty intervals.
struct SampledProblem {
  std::span<const double> influence;  // heaters x cps, row-major
  std::size_t heaters = 0;
  std::size_t cps = 0;
  std::span<const double> ku_lo;
  std::span<const double> ku_hi;
  double f_lo = 0.0;
  double f_hi = 0.0;
  std::uint64_t seed = 0;
};

// per_draw[d] = average over check points of the range violation in draw d.
void sampled_draws_serial(const SampledProblem& p, std::span<double> per_draw);
void sampled_draws_omp(const SampledProblem& p, std::span<double> per_draw);

/// Exhaustive k-subset scan: minimizes w_len * MST(subset) + w_vio * sum(mu).
struct SubsetScanInput {
  std::size_t n = 0;
  int k = 1;
  std::span<const double> dist;       // n x n
  std::span<const double> influence;  // n x cps
  std::size_t cps = 0;
  std::span<const double> ku_lo;
  std::span<const double> ku_hi;
  double f_lo = 0.0;
  double f_hi = 0.0;
  double w_len = 1.0;
  double w_vio = 0.0;
};

struct SubsetScanResult {
  std::vector<int> subset;
  double objective = 0.0;
  double mst_length = 0.0;
  double violation_sum = 0.0;
  std::uint64_t rank = 0;
  std::uint64_t evaluated = 0;
};

SubsetScanResult scan_subsets_serial(const SubsetScanInput& in);
SubsetScanResult scan_subsets_omp(const SubsetScanInput& in);

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Lexicographic rank -> k-subset of {0..n-1}.
std::vector<int> unrank_subset(std::uint64_t rank, int n, int k);

/// MST length over `subset` using Kruskal with (weight, i, j) ordering on a
/// dense distance matrix.
double subset_mst_length(std::span<const double> dist, std::size_t n, std::span<const int> subset);

}  // namespace frostgrid::kernels
