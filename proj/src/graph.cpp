#include "frostgrid/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

#include "frostgrid/errors.hpp"

namespace frostgrid {

WeightedGraph::WeightedGraph(int node_count) : node_count_(node_count) {
  if (node_count < 0) throw InvalidArgument("node_count must be non-negative");
}

void WeightedGraph::add_edge(int i, int j, double weight) {
  if (i == j) throw InvalidArgument("self-loop on node " + std::to_string(i));
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= node_count_) throw InvalidArgument("edge endpoint out of range");
  if (!std::isfinite(weight) || weight < 0.0) throw InvalidArgument("edge weight must be finite and >= 0");
  const auto [it, inserted] = index_.emplace(std::make_pair(i, j), edges_.size());
  if (!inserted) {
    throw InvalidArgument("duplicate edge {" + std::to_string(i) + ", " + std::to_string(j) + "}");
  }
  edges_.push_back({i, j, weight});
}

std::optional<std::size_t> WeightedGraph::find_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  const auto it = index_.find({i, j});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

DisjointSets::DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int DisjointSets::find(int x) {
  int root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) {
    const int next = parent_[x];
    parent_[x] = root;
    x = next;
  }
  return root;
}

bool DisjointSets::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  return true;
}

WeightedGraph complete_graph(std::span<const Point2D> sites) {
  WeightedGraph g(static_cast<int>(sites.size()));
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      g.add_edge(static_cast<int>(i), static_cast<int>(j), distance(sites[i], sites[j]));
    }
  }
  return g;
}

TreeSolution kruskal_mst(const WeightedGraph& g, std::span<const int> nodes) {
  TreeSolution tree;
  tree.nodes.assign(nodes.begin(), nodes.end());
  std::sort(tree.nodes.begin(), tree.nodes.end());
  tree.nodes.erase(std::unique(tree.nodes.begin(), tree.nodes.end()), tree.nodes.end());
  if (tree.nodes.size() <= 1) return tree;

  std::vector<char> member(g.node_count(), 0);
  for (int v : tree.nodes) {
    if (v < 0 || v >= g.node_count()) throw InvalidArgument("node id out of range");
    member[v] = 1;
  }
  std::vector<const Edge*> candidates;
  for (const Edge& e : g.edges()) {
    if (member[e.i] && member[e.j]) candidates.push_back(&e);
  }
  std::sort(candidates.begin(), candidates.end(), [](const Edge* a, const Edge* b) {
    return std::tie(a->weight, a->i, a->j) < std::tie(b->weight, b->i, b->j);
  });

  DisjointSets sets(g.node_count());
  for (const Edge* e : candidates) {
    if (!sets.unite(e->i, e->j)) continue;
    tree.edges.emplace_back(e->i, e->j);
    tree.total_weight += e->weight;
    if (tree.edges.size() + 1 == tree.nodes.size()) break;
  }
  if (tree.edges.size() + 1 != tree.nodes.size()) {
    throw NoSpanningTree("induced subgraph on " + std::to_string(tree.nodes.size()) +
                         " nodes is disconnected");
  }
  return tree;
}

TreeSolution kruskal_mst(const WeightedGraph& g) {
  std::vector<int> all(g.node_count());
  std::iota(all.begin(), all.end(), 0);
  return kruskal_mst(g, all);
}

bool validate_ktree(const WeightedGraph& g, const TreeSolution& sol, int k) {
  if (k < 1) return false;
  const std::set<int> nodes(sol.nodes.begin(), sol.nodes.end());
  if (nodes.size() != sol.nodes.size() || static_cast<int>(nodes.size()) != k) return false;
  if (static_cast<int>(sol.edges.size()) != k - 1) return false;
  for (int v : nodes) {
    if (v < 0 || v >= g.node_count()) return false;
  }
  std::set<std::pair<int, int>> seen;
  DisjointSets sets(g.node_count());
  for (auto [a, b] : sol.edges) {
    if (a > b) std::swap(a, b);
    if (!seen.emplace(a, b).second) return false;
    if (!nodes.count(a) || !nodes.count(b)) return false;
    if (!g.find_edge(a, b)) return false;
    if (!sets.unite(a, b)) return false;  // cycle
  }
  // k - 1 acyclic edges over k nodes form a single component.
  return true;
}

}  // namespace frostgrid
