#pragma once

#include <compare>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "treemod/errors.hpp"

namespace treemod {

struct Edge {
  int u = -1;
  int v = -1;
};

/// Connected undirected multigraph. Vertices are 0..n-1, edges carry stable
/// integer ids equal to their position in the edge list. Parallel edges are
/// allowed (they matter: each one is a distinct object with its own usage
/// value), self-loops are not (a self-loop lies in no spanning tree and only
/// distorts counts).
class Graph {
 public:
  Graph(int vertex_count, std::vector<Edge> edges);
  Graph(int vertex_count, std::vector<Edge> edges, std::vector<long long> vertex_labels);

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int id) const { return edges_[static_cast<size_t>(id)]; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// (edge id, opposite endpoint) pairs, in edge-id order.
  const std::vector<std::pair<int, int>>& incident(int v) const {
    return adj_[static_cast<size_t>(v)];
  }

  /// Original labels from the parsed input, indexed by internal vertex id.
  /// For graphs built programmatically this is the identity.
  const std::vector<long long>& vertex_labels() const { return labels_; }

 private:
  void build_and_validate();

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<long long> labels_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
};

/// A spanning tree named by its sorted, duplicate-free edge-id set. Ordering
/// is lexicographic on that id sequence, which makes containers of trees
/// deterministic.
class SpanningTree {
 public:
  SpanningTree() = default;  // the empty tree (spans a single vertex)
  explicit SpanningTree(std::vector<int> edge_ids);

  const std::vector<int>& edge_ids() const { return ids_; }
  int size() const { return static_cast<int>(ids_.size()); }
  bool contains(int edge_id) const;

  friend bool operator==(const SpanningTree&, const SpanningTree&) = default;
  friend auto operator<=>(const SpanningTree&, const SpanningTree&) = default;

 private:
  std::vector<int> ids_;
};

/// Nonnegative edge weights, indexed by edge id.
struct Density {
  std::vector<double> values;
};

/// True when t's edges form a spanning tree of g (right size, acyclic,
/// connects every vertex, all ids in range).
bool is_spanning_tree(const Graph& g, const SpanningTree& t);

/// Parses an edge-list: one edge per line as two nonnegative integer vertex
/// labels, blank lines and '#' comments ignored. Labels are relabeled to
/// 0..n-1 in order of first appearance; the originals stay available through
/// vertex_labels(). Throws ParseError (empty input, malformed line,
/// self-loop, disconnected graph).
Graph parse_graph(std::string_view text);

/// Exact spanning-tree count via an integer determinant of the reduced
/// Laplacian. Throws std::overflow_error if the count does not fit in 64
/// bits.
std::uint64_t count_spanning_trees(const Graph& g);

/// All spanning trees, in lexicographic order of their sorted edge-id sets.
/// Throws CapExceeded if the graph has more than `cap` trees (checked with
/// count_spanning_trees before any enumeration work).
std::vector<SpanningTree> enumerate_spanning_trees(const Graph& g, std::uint64_t cap);

struct MstResult {
  SpanningTree tree;
  double length;  // sum of rho over the tree's edges
};

/// Minimum-weight spanning tree under rho. Ties are broken toward lower edge
/// ids (Kruskal on (weight, id)), so equal inputs give identical trees.
MstResult min_spanning_tree(const Graph& g, const Density& rho);

/// Ids of all bridges, ascending. Parallel edges are handled: neither copy of
/// a doubled edge is a bridge.
std::vector<int> find_bridges(const Graph& g);

}  // namespace treemod
