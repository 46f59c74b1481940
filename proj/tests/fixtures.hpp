#pragma once

#include <cstdint>
#include <vector>

#include "treemod/game.hpp"
#include "treemod/graph.hpp"
#include "treemod/modulus.hpp"

namespace fixtures {

// Triangle with a pendant edge. Edge ids: 0 = the pendant (a bridge),
// 1..3 = the triangle 0-2-3.
treemod::Graph paw();

// 4-cycle plus one diagonal. Edge ids: 0 = (0,1), 1 = (2,3), 2 = (3,0),
// 3 = (1,2), 4 = the diagonal (1,3). Known exactly: mod2 = 5/9, usage 3/5
// everywhere, game value 3/5.
treemod::Graph diamond();

// The four named trees of the worked diamond example, in the order the
// mixed strategies refer to them: trees[0] and trees[1] share only the
// diagonal; trees[2] and trees[3] avoid it.
std::vector<treemod::SpanningTree> diamond_strategy_trees();

// 4-cycle with a roof vertex on top: 11 spanning trees, homogeneous with
// usage 2/3. Edge ids 2, 4, 5 form the three "upper" edges of which every
// optimal tree uses exactly two.
treemod::Graph house();
inline const std::vector<int>& house_upper_edges() {
  static const std::vector<int> ids{2, 4, 5};
  return ids;
}

treemod::Graph complete_graph(int n);

// Two K5 blocks {0..4} and {5..9} joined by `bridges` edges (i, 5+i).
// K5 edges get ids 0..9 and 10..19; bridge ids start at 20.
treemod::Graph two_k5_with_bridges(int bridges);

// K5 on {0..4} (edge ids 0..9), K6 on {5..10} (ids 10..24), then `bridges`
// edges (i, 5+i) with ids from 25. bridges must lie in 1..5.
treemod::Graph k5_k6_with_bridges(int bridges);

// Deterministic Erdos-Renyi-style sampler: repeatedly draws G(n, p) from the
// seeded generator until the draw is connected and has at most `tree_cap`
// spanning trees. The same arguments always give the same graph.
treemod::Graph random_connected_graph(std::uint32_t seed, int n, double p,
                                      std::uint64_t tree_cap);

// Uniform pmf over an explicit list of trees.
treemod::TreePmf uniform_pmf(const std::vector<treemod::SpanningTree>& trees);

}  // namespace fixtures
