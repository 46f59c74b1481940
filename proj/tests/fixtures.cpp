#include "fixtures.hpp"

#include <random>
#include <stdexcept>

namespace fixtures {

using treemod::Edge;
using treemod::Graph;
using treemod::SpanningTree;
using treemod::TreePmf;

Graph paw() {
  return Graph(4, {{0, 1}, {0, 2}, {2, 3}, {3, 0}});
}

Graph diamond() {
  return Graph(4, {{0, 1}, {2, 3}, {3, 0}, {1, 2}, {1, 3}});
}

std::vector<SpanningTree> diamond_strategy_trees() {
  return {
      SpanningTree({2, 3, 4}),  // diagonal plus the square's right half
      SpanningTree({0, 1, 4}),  // diagonal plus the square's left half
      SpanningTree({0, 1, 2}),  // square minus (1,2)
      SpanningTree({0, 1, 3}),  // square minus (3,0)
  };
}

Graph house() {
  return Graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {3, 4}, {4, 2}});
}

Graph complete_graph(int n) {
  if (n < 2) throw std::invalid_argument("complete graph needs n >= 2");
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
  }
  return Graph(n, std::move(edges));
}

Graph two_k5_with_bridges(int bridges) {
  if (bridges < 1 || bridges > 5) throw std::invalid_argument("bridges must be 1..5");
  std::vector<Edge> edges;
  for (int u = 0; u < 5; ++u) {
    for (int v = u + 1; v < 5; ++v) edges.push_back({u, v});
  }
  for (int u = 5; u < 10; ++u) {
    for (int v = u + 1; v < 10; ++v) edges.push_back({u, v});
  }
  for (int i = 0; i < bridges; ++i) edges.push_back({i, 5 + i});
  return Graph(10, std::move(edges));
}

Graph k5_k6_with_bridges(int bridges) {
  if (bridges < 1 || bridges > 5) throw std::invalid_argument("bridges must be 1..5");
  std::vector<Edge> edges;
  for (int u = 0; u < 5; ++u) {
    for (int v = u + 1; v < 5; ++v) edges.push_back({u, v});
  }
  for (int u = 5; u < 11; ++u) {
    for (int v = u + 1; v < 11; ++v) edges.push_back({u, v});
  }
  for (int i = 0; i < bridges; ++i) edges.push_back({i, 5 + i});
  return Graph(11, std::move(edges));
}

Graph random_connected_graph(std::uint32_t seed, int n, double p, std::uint64_t tree_cap) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (coin(gen) < p) edges.push_back({u, v});
      }
    }
    try {
      Graph g(n, std::move(edges));
      if (treemod::count_spanning_trees(g) <= tree_cap) return g;
    } catch (const std::invalid_argument&) {
      // disconnected draw; try again
    }
  }
  throw std::runtime_error("sampler failed to draw a usable graph (check n, p, cap)");
}

TreePmf uniform_pmf(const std::vector<SpanningTree>& trees) {
  TreePmf mu;
  for (const SpanningTree& t : trees) {
    mu.entries[t] += 1.0 / static_cast<double>(trees.size());
  }
  return mu;
}

}  // namespace fixtures
