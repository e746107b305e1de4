#include "frostgrid/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "frostgrid/rng.hpp"

namespace frostgrid::kernels {

namespace {

inline double influence_value(Point2D a, Point2D b, double k_tun) {
  return std::exp(-k_tun * distance(a, b));
}

double draw_average_violation(const SampledProblem& p, std::size_t draw, std::vector<double>& ku,
                              std::vector<double>& sums) {
  for (std::size_t i = 0; i < p.heaters; ++i) {
    const double u = counter_uniform(p.seed, draw, i);
    ku[i] = p.ku_lo[i] + (p.ku_hi[i] - p.ku_lo[i]) * u;
  }
  std::fill(sums.begin(), sums.end(), 0.0);
  for (std::size_t i = 0; i < p.heaters; ++i) {
    const double* row = p.influence.data() + i * p.cps;
    for (std::size_t s = 0; s < p.cps; ++s) sums[s] += ku[i] * row[s];
  }
  double total = 0.0;
  for (std::size_t s = 0; s < p.cps; ++s) {
    total += std::max(0.0, p.f_lo - sums[s]) + std::max(0.0, sums[s] - p.f_hi);
  }
  return p.cps == 0 ? 0.0 : total / static_cast<double>(p.cps);
}

// Lexicographic successor; false after the last subset.
bool next_subset(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[i] == n - k + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  return true;
}

struct SubsetScratch {
  std::vector<double> lo_sums;
  std::vector<double> hi_sums;
};

void evaluate_subset(const SubsetScanInput& in, const std::vector<int>& subset, SubsetScratch& scratch,
                     double& length, double& violation) {
  length = subset_mst_length(in.dist, in.n, subset);
  violation = 0.0;
  if (in.cps == 0) return;
  std::fill(scratch.lo_sums.begin(), scratch.lo_sums.end(), 0.0);
  std::fill(scratch.hi_sums.begin(), scratch.hi_sums.end(), 0.0);
  for (int i : subset) {
    const double* row = in.influence.data() + static_cast<std::size_t>(i) * in.cps;
    const double lo = in.ku_lo[i];
    const double hi = in.ku_hi[i];
    for (std::size_t s = 0; s < in.cps; ++s) {
      scratch.lo_sums[s] += lo * row[s];
      scratch.hi_sums[s] += hi * row[s];
    }
  }
  for (std::size_t s = 0; s < in.cps; ++s) {
    violation += std::max(0.0, in.f_lo - scratch.lo_sums[s]);
    violation += std::max(0.0, scratch.hi_sums[s] - in.f_hi);
  }
}

// Scans ranks [first, last) and returns the best (objective, rank) pair.
SubsetScanResult scan_range(const SubsetScanInput& in, std::uint64_t first, std::uint64_t last) {
  SubsetScanResult best;
  best.objective = std::numeric_limits<double>::infinity();
  if (first >= last) return best;
  SubsetScratch scratch{std::vector<double>(in.cps), std::vector<double>(in.cps)};
  std::vector<int> subset = unrank_subset(first, static_cast<int>(in.n), in.k);
  for (std::uint64_t rank = first; rank < last; ++rank) {
    double length = 0.0;
    double violation = 0.0;
    evaluate_subset(in, subset, scratch, length, violation);
    const double objective = in.w_len * length + in.w_vio * violation;
    ++best.evaluated;
    if (objective < best.objective) {
      best.objective = objective;
      best.mst_length = length;
      best.violation_sum = violation;
      best.rank = rank;
      best.subset = subset;
    }
    if (rank + 1 < last) next_subset(subset, static_cast<int>(in.n));
  }
  return best;
}

bool better(const SubsetScanResult& a, const SubsetScanResult& b) {
  if (a.subset.empty()) return false;
  if (b.subset.empty()) return true;
  return std::tie(a.objective, a.rank) < std::tie(b.objective, b.rank);
}

}  // namespace

void influence_matrix_serial(std::span<const Point2D> sources, std::span<const Point2D> targets,
                             double k_tun, std::span<double> out) {
  const std::size_t cols = targets.size();
  for (std::size_t i = 0; i < sources.size(); ++i) {
    for (std::size_t s = 0; s < cols; ++s) {
      out[i * cols + s] = influence_value(sources[i], targets[s], k_tun);
    }
  }
}

void influence_matrix_omp(std::span<const Point2D> sources, std::span<const Point2D> targets,
                          double k_tun, std::span<double> out) {
  const std::size_t cols = targets.size();
  const auto rows = static_cast<std::int64_t>(sources.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::size_t s = 0; s < cols; ++s) {
      out[static_cast<std::size_t>(i) * cols + s] = influence_value(sources[i], targets[s], k_tun);
    }
  }
}

void sampled_draws_serial(const SampledProblem& p, std::span<double> per_draw) {
  std::vector<double> ku(p.heaters);
  std::vector<double> sums(p.cps);
  for (std::size_t d = 0; d < per_draw.size(); ++d) {
    per_draw[d] = draw_average_violation(p, d, ku, sums);
  }
}

void sampled_draws_omp(const SampledProblem& p, std::span<double> per_draw) {
  const auto draws = static_cast<std::int64_t>(per_draw.size());
#pragma omp parallel
  {
    std::vector<double> ku(p.heaters);
    std::vector<double> sums(p.cps);
#pragma omp for schedule(static)
    for (std::int64_t d = 0; d < draws; ++d) {
      per_draw[d] = draw_average_violation(p, static_cast<std::size_t>(d), ku, sums);
    }
  }
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(result);
}

std::vector<int> unrank_subset(std::uint64_t rank, int n, int k) {
  std::vector<int> subset;
  subset.reserve(k);
  int next = 0;
  for (int slot = 0; slot < k; ++slot) {
    for (int candidate = next; candidate < n; ++candidate) {
      // Number of subsets that start with `candidate` in this slot.
      const std::uint64_t block = binomial(n - candidate - 1, k - slot - 1);
      if (rank < block) {
        subset.push_back(candidate);
        next = candidate + 1;
        break;
      }
      rank -= block;
    }
  }
  return subset;
}

double subset_mst_length(std::span<const double> dist, std::size_t n, std::span<const int> subset) {
  const std::size_t m = subset.size();
  if (m < 2) return 0.0;
  struct LocalEdge {
    double w;
    int a;
    int b;
  };
  std::vector<LocalEdge> edges;
  edges.reserve(m * (m - 1) / 2);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      int i = subset[a];
      int j = subset[b];
      if (i > j) std::swap(i, j);
      edges.push_back({dist[static_cast<std::size_t>(i) * n + j], i, j});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const LocalEdge& l, const LocalEdge& r) {
    return std::tie(l.w, l.a, l.b) < std::tie(r.w, r.a, r.b);
  });
  // Tiny union-find keyed by global id through a linear map.
  std::vector<int> ids(subset.begin(), subset.end());
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto local = [&](int id) {
    return static_cast<int>(std::find(ids.begin(), ids.end(), id) - ids.begin());
  };
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  double total = 0.0;
  std::size_t used = 0;
  for (const LocalEdge& e : edges) {
    const int ra = find(local(e.a));
    const int rb = find(local(e.b));
    if (ra == rb) continue;
    parent[ra] = rb;
    total += e.w;
    if (++used == m - 1) break;
  }
  return total;
}

SubsetScanResult scan_subsets_serial(const SubsetScanInput& in) {
  return scan_range(in, 0, binomial(in.n, static_cast<std::uint64_t>(in.k)));
}

SubsetScanResult scan_subsets_omp(const SubsetScanInput& in) {
  const std::uint64_t total = binomial(in.n, static_cast<std::uint64_t>(in.k));
  const auto chunks = static_cast<std::int64_t>(
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(total, 64ULL * omp_get_max_threads())));
  std::vector<SubsetScanResult> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::uint64_t first = total * static_cast<std::uint64_t>(c) / chunks;
    const std::uint64_t last = total * static_cast<std::uint64_t>(c + 1) / chunks;
    partial[c] = scan_range(in, first, last);
  }
  SubsetScanResult best;
  best.objective = std::numeric_limits<double>::infinity();
  std::uint64_t evaluated = 0;
  for (const auto& p : partial) {
    evaluated += p.evaluated;
    if (better(p, best)) best = p;
  }
  best.evaluated = evaluated;
  return best;
}

}  // namespace frostgrid::kernels
