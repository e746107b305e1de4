#pragma once

// Reference implementations used only by the tests. None of them call into the
// library's algorithms; they share nothing but the data types.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "frostgrid/geometry.hpp"
#include "frostgrid/graph.hpp"
#include "frostgrid/milp.hpp"

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// O(n^2) Prim on a dense matrix; missing edges are +inf. Returns +inf when the
// graph is disconnected.
inline double prim_total(const std::vector<std::vector<double>>& w) {
  const std::size_t n = w.size();
  if (n == 0) return 0.0;
  std::vector<double> key(n, kInf);
  std::vector<char> in(n, 0);
  key[0] = 0.0;
  double total = 0.0;
  for (std::size_t it = 0; it < n; ++it) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in[v] && (u == n || key[v] < key[u])) u = v;
    }
    if (key[u] == kInf) return kInf;
    in[u] = 1;
    total += key[u];
    for (std::size_t v = 0; v < n; ++v) {
      if (!in[v] && w[u][v] < key[v]) key[v] = w[u][v];
    }
  }
  return total;
}

inline double prim_points(const std::vector<frostgrid::Point2D>& pts) {
  std::vector<std::vector<double>> w(pts.size(), std::vector<double>(pts.size(), kInf));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i != j) w[i][j] = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
    }
  }
  return prim_total(w);
}

// (edge mask over g.edges() order, node mask)
using Projection = std::pair<std::uint32_t, std::uint32_t>;

// Every k-node subtree of g by brute force over node and edge subsets.
inline std::set<Projection> enumerate_ktrees(const frostgrid::WeightedGraph& g, int k) {
  std::set<Projection> out;
  const int n = g.node_count();
  const auto& edges = g.edges();
  for (std::uint32_t nodes = 1; nodes < (1u << n); ++nodes) {
    if (std::popcount(nodes) != k) continue;
    std::vector<int> inside;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if ((nodes >> edges[e].i & 1u) && (nodes >> edges[e].j & 1u)) inside.push_back(static_cast<int>(e));
    }
    const auto m = static_cast<int>(inside.size());
    for (std::uint32_t pick = 0; pick < (1u << m); ++pick) {
      if (std::popcount(pick) != k - 1) continue;
      std::uint32_t emask = 0;
      std::vector<std::vector<int>> adj(n);
      for (int b = 0; b < m; ++b) {
        if (!(pick >> b & 1u)) continue;
        const auto& e = edges[inside[b]];
        emask |= 1u << inside[b];
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
      }
      // k-1 edges on k nodes: a tree iff connected.
      const int start = std::countr_zero(nodes);
      std::uint32_t seen = 1u << start;
      std::vector<int> stack{start};
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v]) {
          if (!(seen >> w & 1u)) {
            seen |= 1u << w;
            stack.push_back(w);
          }
        }
      }
      if (seen == nodes) out.insert({emask, nodes});
    }
  }
  return out;
}

// Enumerates every binary assignment of a MILP whose continuous part is
// feasible. Interval propagation prunes the binary search; at each leaf the
// continuous rows must reduce to bounds and two-variable difference
// constraints, which Bellman-Ford decides exactly.
class FeasibleEnumerator {
 public:
  explicit FeasibleEnumerator(const frostgrid::MilpModel& m) : m_(m) {
    for (int j = 0; j < m.variable_count(); ++j) {
      if (m.variables()[j].kind == frostgrid::VarKind::Binary) binaries_.push_back(j);
    }
  }

  // Branching order: caller-supplied ids first, then the rest in id order.
  void set_order(std::vector<int> first) {
    std::vector<char> used(m_.variable_count(), 0);
    std::vector<int> order;
    for (int v : first) {
      if (!used[v]) order.push_back(v);
      used[v] = 1;
    }
    for (int v : binaries_) {
      if (!used[v]) order.push_back(v);
    }
    binaries_ = std::move(order);
  }

  template <class Leaf>
  void run(Leaf&& leaf) {
    std::vector<double> lo(m_.variable_count());
    std::vector<double> hi(m_.variable_count());
    for (int j = 0; j < m_.variable_count(); ++j) {
      lo[j] = m_.variables()[j].lower;
      hi[j] = m_.variables()[j].upper;
    }
    dfs(lo, hi, leaf);
  }

  long leaves_checked = 0;

 private:
  static constexpr double kEps = 1e-9;

  bool is_fixed(const std::vector<double>& lo, const std::vector<double>& hi, int j) const {
    return lo[j] == hi[j];
  }

  bool propagate(std::vector<double>& lo, std::vector<double>& hi) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& row : m_.constraints()) {
        double min_a = 0.0;
        double max_a = 0.0;
        for (const auto& t : row.terms) {
          min_a += t.coeff > 0 ? t.coeff * lo[t.var] : t.coeff * hi[t.var];
          max_a += t.coeff > 0 ? t.coeff * hi[t.var] : t.coeff * lo[t.var];
        }
        const bool need_le = row.sense != frostgrid::Sense::GreaterEqual;
        const bool need_ge = row.sense != frostgrid::Sense::LessEqual;
        if (need_le && min_a > row.rhs + kEps) return false;
        if (need_ge && max_a < row.rhs - kEps) return false;
        for (const auto& t : row.terms) {
          if (m_.variables()[t.var].kind != frostgrid::VarKind::Binary || is_fixed(lo, hi, t.var)) continue;
          const double c = std::abs(t.coeff);
          // Value that raises (resp. lowers) the activity by |c| over its extreme.
          const double raise = t.coeff > 0 ? 1.0 : 0.0;
          if (need_le && std::isfinite(min_a) && min_a + c > row.rhs + kEps) {
            lo[t.var] = hi[t.var] = 1.0 - raise;
            changed = true;
            break;
          }
          if (need_ge && std::isfinite(max_a) && max_a - c < row.rhs - kEps) {
            lo[t.var] = hi[t.var] = raise;
            changed = true;
            break;
          }
        }
      }
    }
    return true;
  }

  template <class Leaf>
  void dfs(std::vector<double> lo, std::vector<double> hi, Leaf& leaf) {
    if (!propagate(lo, hi)) return;
    for (int v : binaries_) {
      if (is_fixed(lo, hi, v)) continue;
      for (double val : {0.0, 1.0}) {
        auto l2 = lo;
        auto h2 = hi;
        l2[v] = h2[v] = val;
        dfs(std::move(l2), std::move(h2), leaf);
      }
      return;
    }
    ++leaves_checked;
    if (continuous_feasible(lo, hi)) leaf(lo);
  }

  bool continuous_feasible(const std::vector<double>& lo, const std::vector<double>& hi) const {
    // Node 0 is the zero reference; continuous variable j maps to node[j].
    std::vector<int> node(m_.variable_count(), -1);
    int count = 1;
    for (int j = 0; j < m_.variable_count(); ++j) {
      if (m_.variables()[j].kind == frostgrid::VarKind::Continuous) node[j] = count++;
    }
    struct Arc {
      int from, to;
      double w;
    };
    std::vector<Arc> arcs;
    // x_a - x_b <= c  ->  arc b -> a with weight c
    auto diff = [&](int a, int b, double c) { arcs.push_back({b, a, c}); };
    for (int j = 0; j < m_.variable_count(); ++j) {
      if (node[j] < 0) continue;
      if (std::isfinite(hi[j])) diff(node[j], 0, hi[j]);
      if (std::isfinite(lo[j])) diff(0, node[j], -lo[j]);
    }
    for (const auto& row : m_.constraints()) {
      double rest = row.rhs;
      std::vector<frostgrid::Term> cont;
      for (const auto& t : row.terms) {
        if (node[t.var] >= 0) {
          cont.push_back(t);
        } else {
          rest -= t.coeff * lo[t.var];
        }
      }
      // Each row as one or two "sum <= rest" statements.
      std::vector<std::pair<double, std::vector<frostgrid::Term>>> le;
      if (row.sense != frostgrid::Sense::GreaterEqual) le.push_back({rest, cont});
      if (row.sense != frostgrid::Sense::LessEqual) {
        auto neg = cont;
        for (auto& t : neg) t.coeff = -t.coeff;
        le.push_back({-rest, neg});
      }
      for (const auto& [r, terms] : le) {
        if (terms.empty()) {
          if (r < -kEps) return false;
        } else if (terms.size() == 1) {
          const auto& t = terms[0];
          if (t.coeff > 0) {
            diff(node[t.var], 0, r / t.coeff);
          } else {
            diff(0, node[t.var], r / -t.coeff);
          }
        } else if (terms.size() == 2 && std::abs(terms[0].coeff + terms[1].coeff) < 1e-12) {
          const double c = std::abs(terms[0].coeff);
          const auto& pos = terms[0].coeff > 0 ? terms[0] : terms[1];
          const auto& neg = terms[0].coeff > 0 ? terms[1] : terms[0];
          diff(node[pos.var], node[neg.var], r / c);
        } else {
          throw std::logic_error("row is not a difference constraint after fixing binaries");
        }
      }
    }
    std::vector<double> dist(count, 0.0);
    for (int it = 0; it < count; ++it) {
      bool relaxed = false;
      for (const Arc& a : arcs) {
        if (dist[a.from] + a.w < dist[a.to] - kEps) {
          dist[a.to] = dist[a.from] + a.w;
          relaxed = true;
        }
      }
      if (!relaxed) return true;
    }
    return false;  // still relaxing after |V| rounds: negative cycle
  }

  const frostgrid::MilpModel& m_;
  std::vector<int> binaries_;
};

// Projection of the k-MST model's feasible binary points onto (real z, l).
inline std::set<Projection> kmst_projection(const frostgrid::WeightedGraph& g, int k,
                                            frostgrid::PotentialCap cap = frostgrid::PotentialCap::TreeDepth,
                                            long* leaves = nullptr) {
  frostgrid::MilpModel model;
  frostgrid::VariableCatalog cat;
  frostgrid::build_kmst_constraints(g, k, model, cat, {cap});
  std::vector<int> edge_var;
  for (const auto& e : g.edges()) edge_var.push_back(cat.z.at({e.i, e.j}));

  FeasibleEnumerator en(model);
  std::vector<int> order = cat.ell;
  order.insert(order.end(), edge_var.begin(), edge_var.end());
  en.set_order(order);
  std::set<Projection> out;
  en.run([&](const std::vector<double>& x) {
    std::uint32_t emask = 0;
    std::uint32_t nmask = 0;
    for (std::size_t e = 0; e < edge_var.size(); ++e) {
      if (x[edge_var[e]] > 0.5) emask |= 1u << e;
    }
    for (std::size_t i = 0; i < cat.ell.size(); ++i) {
      if (x[cat.ell[i]] > 0.5) nmask |= 1u << i;
    }
    out.insert({emask, nmask});
  });
  if (leaves) *leaves = en.leaves_checked;
  return out;
}

// Small LP by vertex enumeration: min c'x, rows a_r x (sense) b_r, finite box.
struct SmallLp {
  std::vector<double> c;
  std::vector<std::vector<double>> a;
  std::vector<frostgrid::Sense> sense;
  std::vector<double> b;
  std::vector<double> lo;
  std::vector<double> hi;
};

inline bool solve_dense(std::vector<std::vector<double>> m, std::vector<double> r, std::vector<double>& x) {
  const std::size_t n = r.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i) {
      if (std::abs(m[i][col]) > std::abs(m[piv][col])) piv = i;
    }
    if (std::abs(m[piv][col]) < 1e-10) return false;
    std::swap(m[piv], m[col]);
    std::swap(r[piv], r[col]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col) continue;
      const double f = m[i][col] / m[col][col];
      for (std::size_t j = col; j < n; ++j) m[i][j] -= f * m[col][j];
      r[i] -= f * r[col];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = r[i] / m[i][i];
  return true;
}

// Returns +inf when infeasible. The box makes the LP bounded.
inline double vertex_enumeration(const SmallLp& lp) {
  const std::size_t n = lp.c.size();
  std::vector<std::vector<double>> hyper;
  std::vector<double> rhs;
  for (std::size_t r = 0; r < lp.a.size(); ++r) {
    hyper.push_back(lp.a[r]);
    rhs.push_back(lp.b[r]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    hyper.push_back(e);
    rhs.push_back(lp.lo[j]);
    hyper.push_back(e);
    rhs.push_back(lp.hi[j]);
  }
  const std::size_t h = hyper.size();
  double best = kInf;
  std::vector<int> pick(n);
  std::vector<char> mask(h, 0);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(n), 1);
  std::sort(mask.begin(), mask.end(), std::greater<>());
  do {
    std::vector<std::vector<double>> m;
    std::vector<double> r;
    for (std::size_t i = 0; i < h; ++i) {
      if (mask[i]) {
        m.push_back(hyper[i]);
        r.push_back(rhs[i]);
      }
    }
    std::vector<double> x;
    if (!solve_dense(m, r, x)) continue;
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) ok = x[j] >= lp.lo[j] - 1e-7 && x[j] <= lp.hi[j] + 1e-7;
    for (std::size_t row = 0; row < lp.a.size() && ok; ++row) {
      double act = 0.0;
      for (std::size_t j = 0; j < n; ++j) act += lp.a[row][j] * x[j];
      if (lp.sense[row] != frostgrid::Sense::GreaterEqual) ok = ok && act <= lp.b[row] + 1e-7;
      if (lp.sense[row] != frostgrid::Sense::LessEqual) ok = ok && act >= lp.b[row] - 1e-7;
    }
    if (!ok) continue;
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += lp.c[j] * x[j];
    best = std::min(best, obj);
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

// Brute-force design optimum with direct formulas (no library kernels).
struct DesignOptimum {
  double objective = kInf;
  std::vector<int> subset;
};

inline double worst_violation_sum(const std::vector<frostgrid::Point2D>& heaters, const std::vector<double>& ku_lo,
                                  const std::vector<double>& ku_hi, const std::vector<frostgrid::Point2D>& cps,
                                  double k_tun, double f_lo, double f_hi) {
  double total = 0.0;
  for (const auto& s : cps) {
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < heaters.size(); ++i) {
      const double h = std::exp(-k_tun * std::hypot(heaters[i].x - s.x, heaters[i].y - s.y));
      lo += ku_lo[i] * h;
      hi += ku_hi[i] * h;
    }
    total += std::max(0.0, f_lo - lo) + std::max(0.0, hi - f_hi);
  }
  return total;
}

template <class Instance>
DesignOptimum brute_force_design(const Instance& inst, double alpha) {
  DesignOptimum best;
  const auto n = static_cast<int>(inst.candidate_sites.size());
  std::vector<char> mask(n, 0);
  std::fill(mask.begin(), mask.begin() + inst.k, 1);
  do {
    std::vector<int> subset;
    std::vector<frostgrid::Point2D> pts;
    std::vector<double> lo;
    std::vector<double> hi;
    for (int i = 0; i < n; ++i) {
      if (!mask[i]) continue;
      subset.push_back(i);
      pts.push_back(inst.candidate_sites[i]);
      lo.push_back(inst.ku_lo[i]);
      hi.push_back(inst.ku_hi[i]);
    }
    const double obj = prim_points(pts) / inst.beta1_nor +
                       alpha / inst.beta2_nor *
                           worst_violation_sum(pts, lo, hi, inst.check_points, inst.k_tun, inst.f_lo, inst.f_hi);
    if (obj < best.objective) {
      best.objective = obj;
      best.subset = subset;
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

}  // namespace oracle
