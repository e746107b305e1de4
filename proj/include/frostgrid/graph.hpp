#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "frostgrid/geometry.hpp"

namespace frostgrid {

struct Edge {
  int i = 0;  // i < j
  int j = 0;
  double weight = 0.0;
};

/// Undirected weighted graph stored as an edge list.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(int node_count);

  /// Adds {i, j}; endpoints are normalized so that i < j. Throws
  /// InvalidArgument on self-loops, duplicates, bad ids or bad weights.
  void add_edge(int i, int j, double weight);

  int node_count() const { return node_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::optional<std::size_t> find_edge(int i, int j) const;

 private:
  int node_count_ = 0;
  std::vector<Edge> edges_;
  std::map<std::pair<int, int>, std::size_t> index_;
};

struct TreeSolution {
  std::vector<int> nodes;                  // sorted
  std::vector<std::pair<int, int>> edges;  // (i, j), i < j
  double total_weight = 0.0;
};

/// Union-find with path compression and union by rank.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);
  int find(int x);
  bool unite(int a, int b);

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

WeightedGraph complete_graph(std::span<const Point2D> sites);

/// Minimum spanning tree of the subgraph induced by `nodes`. Edges are taken in
/// (weight, i, j) order, so ties resolve deterministically. Throws
/// NoSpanningTree if the induced subgraph is disconnected.
TreeSolution kruskal_mst(const WeightedGraph& g, std::span<const int> nodes);
TreeSolution kruskal_mst(const WeightedGraph& g);

/// True iff `sol` is a tree on exactly k nodes of g using only edges of g.
bool validate_ktree(const WeightedGraph& g, const TreeSolution& sol, int k);

}  // namespace frostgrid
