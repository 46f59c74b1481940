#include <benchmark/benchmark.h>

#include <vector>

#include "treemod/game.hpp"
#include "treemod/graph.hpp"
#include "treemod/modulus.hpp"
#include "treemod/oracle.hpp"

namespace {

using treemod::Edge;
using treemod::Graph;

Graph complete_graph(int n) {
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
  }
  return Graph(n, edges);
}

Graph diamond() { return Graph(4, {{0, 1}, {2, 3}, {3, 0}, {1, 2}, {1, 3}}); }

Graph house() { return Graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {3, 4}, {4, 2}}); }

// K5 and K6 joined by three matching edges; the largest graph the acceptance
// checks solve, so a good stand-in for "real" inputs.
Graph block_chain() {
  std::vector<Edge> edges;
  for (int u = 0; u < 5; ++u) {
    for (int v = u + 1; v < 5; ++v) edges.push_back({u, v});
  }
  for (int u = 5; u < 11; ++u) {
    for (int v = u + 1; v < 11; ++v) edges.push_back({u, v});
  }
  for (int i = 0; i < 3; ++i) edges.push_back({i, 5 + i});
  return Graph(11, edges);
}

void modulus_diamond(benchmark::State& state) {
  auto g = diamond();
  for (auto _ : state) benchmark::DoNotOptimize(treemod::compute_modulus(g));
}
BENCHMARK(modulus_diamond);

void modulus_house(benchmark::State& state) {
  auto g = house();
  for (auto _ : state) benchmark::DoNotOptimize(treemod::compute_modulus(g));
}
BENCHMARK(modulus_house);

void modulus_complete(benchmark::State& state) {
  auto g = complete_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(treemod::compute_modulus(g));
}
BENCHMARK(modulus_complete)->Arg(6)->Arg(8);

void modulus_block_chain(benchmark::State& state) {
  auto g = block_chain();
  for (auto _ : state) benchmark::DoNotOptimize(treemod::compute_modulus(g));
}
BENCHMARK(modulus_block_chain);

void game_block_chain(benchmark::State& state) {
  auto g = block_chain();
  for (auto _ : state) benchmark::DoNotOptimize(treemod::solve_game(g));
}
BENCHMARK(game_block_chain);

void packing_block_chain(benchmark::State& state) {
  auto g = block_chain();
  for (auto _ : state) benchmark::DoNotOptimize(treemod::solve_game_1mod(g));
}
BENCHMARK(packing_block_chain);

void mst_complete(benchmark::State& state) {
  auto g = complete_graph(static_cast<int>(state.range(0)));
  treemod::Density rho{std::vector<double>(static_cast<size_t>(g.edge_count()), 1.0)};
  for (int e = 0; e < g.edge_count(); ++e) {
    rho.values[static_cast<size_t>(e)] += 1e-3 * e;  // break ties, keep it deterministic
  }
  for (auto _ : state) benchmark::DoNotOptimize(treemod::min_spanning_tree(g, rho));
}
BENCHMARK(mst_complete)->Arg(8)->Arg(16);

void count_trees_complete(benchmark::State& state) {
  auto g = complete_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(treemod::count_spanning_trees(g));
}
BENCHMARK(count_trees_complete)->Arg(8)->Arg(12);

void enumerate_trees_house(benchmark::State& state) {
  auto g = house();
  for (auto _ : state) benchmark::DoNotOptimize(treemod::enumerate_spanning_trees(g, 16));
}
BENCHMARK(enumerate_trees_house);

void overlap_oracle_diamond(benchmark::State& state) {
  auto g = diamond();
  for (auto _ : state) benchmark::DoNotOptimize(treemod::oracle_meo(g));
}
BENCHMARK(overlap_oracle_diamond);

void uniform_strategy_block_chain(benchmark::State& state) {
  auto g = block_chain();
  for (auto _ : state) benchmark::DoNotOptimize(treemod::evaluate_uniform_strategy(g));
}
BENCHMARK(uniform_strategy_block_chain);

}  // namespace

BENCHMARK_MAIN();
