#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "frostgrid/kernels.hpp"
#include "frostgrid/rng.hpp"
#include "oracles.hpp"

using namespace frostgrid;

TEST_SUITE("kernels") {

TEST_CASE("influence kernels agree bit for bit") {
  const OrchardInstance t1 = generate_instance({});
  std::vector<double> a(t1.site_count() * t1.cp_count());
  std::vector<double> b(a.size());
  kernels::influence_matrix_serial(t1.candidate_sites, t1.check_points, t1.k_tun, a);
  kernels::influence_matrix_omp(t1.candidate_sites, t1.check_points, t1.k_tun, b);
  CHECK(a == b);
  CHECK(build_influence_matrix(t1, Execution::Serial).data().size() == a.size());
}

TEST_CASE("sampled draws agree and stay inside the interval") {
  auto inst = fixtures::random_instance(2, 6, 9, 3, 1.0);
  std::vector<double> h(6 * 9);
  kernels::influence_matrix_serial(inst.candidate_sites, inst.check_points, inst.k_tun, h);
  kernels::SampledProblem p{h, 6, 9, inst.ku_lo, inst.ku_hi, inst.f_lo, inst.f_hi, 17};
  std::vector<double> s(300), o(300);
  kernels::sampled_draws_serial(p, s);
  kernels::sampled_draws_omp(p, o);
  CHECK(s == o);
  for (double v : s) CHECK(v >= 0.0);
}

TEST_CASE("counter-based generator") {
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  for (std::uint64_t d = 0; d < 1000; ++d) {
    const double u = counter_uniform(42, d, 3);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(counter_uniform(1, 2, 3) == counter_uniform(1, 2, 3));
  CHECK(counter_uniform(1, 2, 3) != counter_uniform(1, 2, 4));
  CHECK(counter_uniform(1, 2, 3) != counter_uniform(2, 2, 3));
}

TEST_CASE("binomial and unranking") {
  CHECK(kernels::binomial(5, 2) == 10);
  CHECK(kernels::binomial(187, 21) == UINT64_MAX);
  CHECK(kernels::binomial(12, 0) == 1);
  CHECK(kernels::binomial(3, 4) == 0);
  CHECK(kernels::unrank_subset(0, 5, 3) == std::vector<int>{0, 1, 2});
  CHECK(kernels::unrank_subset(9, 5, 3) == std::vector<int>{2, 3, 4});
  // Every rank maps to a distinct sorted subset, in lexicographic order.
  std::vector<int> prev;
  for (std::uint64_t r = 0; r < kernels::binomial(7, 3); ++r) {
    const auto s = kernels::unrank_subset(r, 7, 3);
    CHECK(std::is_sorted(s.begin(), s.end()));
    if (!prev.empty()) CHECK(prev < s);
    prev = s;
  }
}

TEST_CASE("subset MST length matches Prim") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 50);
  std::vector<Point2D> pts(12);
  for (auto& p : pts) p = {u(rng), u(rng)};
  std::vector<double> dist(144);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) dist[i * 12 + j] = distance(pts[i], pts[j]);
  }
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> subset;
    std::vector<Point2D> chosen;
    for (int i = 0; i < 12; ++i) {
      if (rng() % 2) {
        subset.push_back(i);
        chosen.push_back(pts[i]);
      }
    }
    if (subset.empty()) continue;
    CHECK(kernels::subset_mst_length(dist, 12, subset) == doctest::Approx(oracle::prim_points(chosen)).epsilon(1e-12));
  }
}

TEST_CASE("subset scans agree") {
  auto inst = fixtures::random_instance(6, 12, 10, 4, 5.0);
  std::vector<double> dist(144), h(120);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) dist[i * 12 + j] = distance(inst.candidate_sites[i], inst.candidate_sites[j]);
  }
  kernels::influence_matrix_serial(inst.candidate_sites, inst.check_points, inst.k_tun, h);
  kernels::SubsetScanInput in{12, 4, dist, h, 10, inst.ku_lo, inst.ku_hi, inst.f_lo, inst.f_hi, 1.0 / 600, 5.0 / 240};
  const auto s = kernels::scan_subsets_serial(in);
  const auto o = kernels::scan_subsets_omp(in);
  CHECK(s.subset == o.subset);
  CHECK(s.objective == o.objective);
  CHECK(s.rank == o.rank);
  CHECK(s.evaluated == 495);
  CHECK(o.evaluated == 495);
}

}  // TEST_SUITE
