#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "frostgrid/instance.hpp"

namespace fixtures {

// Instance over explicit points; no trees, uniform bounds.
inline frostgrid::OrchardInstance make_instance(std::vector<frostgrid::Point2D> sites,
                                                std::vector<frostgrid::Point2D> cps, int k, double alpha = 0.0,
                                                double length = 0.0, double width = 0.0) {
  frostgrid::OrchardInstance inst;
  for (const auto& p : sites) {
    length = std::max(length, p.x);
    width = std::max(width, p.y);
  }
  for (const auto& p : cps) {
    length = std::max(length, p.x);
    width = std::max(width, p.y);
  }
  inst.length_m = std::max(length, 1.0);
  inst.width_m = std::max(width, 1.0);
  inst.candidate_sites = std::move(sites);
  inst.check_points = std::move(cps);
  inst.k = k;
  inst.d_ht_m = 0.0;
  inst.f_lo = 0.5;
  inst.f_hi = 1.0;
  inst.k_tun = 0.01;
  inst.ku_lo.assign(inst.candidate_sites.size(), 0.8);
  inst.ku_hi.assign(inst.candidate_sites.size(), 1.0);
  inst.alpha = alpha;
  inst.beta1_nor = 600.0;
  inst.beta2_nor = 240.0;
  return inst;
}

inline frostgrid::OrchardInstance unit_square(int k, double alpha = 0.0) {
  return make_instance({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {{0.5, 0.5}}, k, alpha);
}

// Random orchard: sites and check points uniform in a 60 x 40 field with
// heterogeneous uncertainty intervals. A steeper decay than the orchard default
// keeps coverage in the interesting range for a handful of heaters.
inline frostgrid::OrchardInstance random_instance(std::uint64_t seed, int sites, int cps, int k, double alpha) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, 60.0);
  std::uniform_real_distribution<double> uy(0.0, 40.0);
  std::uniform_real_distribution<double> ulo(0.6, 0.9);
  std::uniform_real_distribution<double> uw(0.0, 0.3);
  std::vector<frostgrid::Point2D> s;
  std::vector<frostgrid::Point2D> c;
  for (int i = 0; i < sites; ++i) s.push_back({ux(rng), uy(rng)});
  for (int i = 0; i < cps; ++i) c.push_back({ux(rng), uy(rng)});
  auto inst = make_instance(s, c, k, alpha, 60.0, 40.0);
  inst.k_tun = 0.05;
  for (int i = 0; i < sites; ++i) {
    inst.ku_lo[i] = ulo(rng);
    inst.ku_hi[i] = inst.ku_lo[i] + uw(rng);
  }
  return inst;
}

}  // namespace fixtures
