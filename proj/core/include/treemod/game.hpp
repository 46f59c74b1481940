#pragma once

#include <cstdint>
#include <vector>

#include "treemod/graph.hpp"
#include "treemod/modulus.hpp"
#include "treemod/rational.hpp"

namespace treemod {

/// Mixed strategy for the interdictor: a probability per edge id.
struct EdgePmf {
  std::vector<double> entries;
};

/// Throws std::invalid_argument unless entries match the edge count, are
/// nonnegative, and sum to 1 within `tol`.
void validate_edge_pmf(const EdgePmf& v, int edge_count, double tol = 1e-12);

/// A partition of the vertices into k >= 2 connected parts, together with
/// the set of edges crossing between parts and its weight |edge_set|/(k-1).
struct FeasiblePartition {
  std::vector<std::vector<int>> parts;  // each sorted ascending; parts ordered by smallest member
  std::vector<int> edge_set;            // sorted ids of the crossing edges
  int part_count = 0;
  Rational weight;
};

/// Exact-arithmetic evidence that a strategy pair is an equilibrium: the
/// shortest tree under the interdiction strategy is at least as long as the
/// largest expected usage.
struct EquilibriumCertificate {
  Rational shortest_tree_length;
  Rational max_usage;
  SpanningTree witness_tree;  // tree attaining the minimum length
};

struct GameSolution {
  Rational value;                 // expected interception probability at equilibrium
  TreePmf broadcast_strategy;     // optimal tree pmf for the sender
  EdgePmf interdiction_strategy;  // uniform over the partition's crossing edges
  FeasiblePartition partition;
  EquilibriumCertificate certificate;
};

/// Reads the minimum-weight partition off an exact usage vector: the edges
/// attaining the maximum usage form the crossing set, the parts are the
/// components left after removing them. Throws SolverError if the argmax
/// edges fail to disconnect the graph, one of them ends up inside a part, or
/// the partition weight does not invert the maximum usage — all signs of a
/// usage vector that was not actually optimal.
FeasiblePartition extract_partition(const Graph& g, const RationalUsage& eta);

/// Graph strength: the minimum weight over feasible partitions, computed by
/// solving the quadratic program and reading the partition off the optimal
/// usage. Exact rational output.
Rational strength(const Graph& g, double tol = 1e-9);

/// Solves the broadcast game: optimal strategies for both players, the
/// underlying partition, and an exact certificate that the pair is an
/// equilibrium. The game value is (k-1)/|edge_set| for the extracted
/// partition.
GameSolution solve_game(const Graph& g, double tol = 1e-9);

/// Floating-point audit of a candidate strategy pair.
struct EquilibriumCheck {
  bool is_equilibrium = false;      // shortest tree length >= max usage - tol
  double shortest_tree_length = 0.0;
  double max_usage = 0.0;
  SpanningTree witness_tree;
  bool broadcast_support_ok = false;     // every supported tree is a shortest tree
  bool interdiction_support_ok = false;  // every supported edge attains the max usage
};

/// Checks whether (u, v) is an equilibrium within tol, reporting both sides
/// of the inequality, a witness tree, and the two support conditions.
/// Validates u and v as pmfs at user precision (mass within 1e-9).
EquilibriumCheck verify_equilibrium(const Graph& g, const TreePmf& u, const EdgePmf& v,
                                    double tol = 1e-9);

struct HomogeneityReport {
  bool homogeneous = false;  // optimal usage is the same on every edge
  Rational uniform_value;    // the forced constant (vertex_count-1)/edge_count
};

/// Decides from a solved modulus whether the graph is homogeneous, i.e. the
/// optimal usage is constant. When it is, the constant can only be
/// (vertex_count-1)/edge_count; anything else trips a SolverError.
HomogeneityReport check_homogeneity(const Graph& g, const ModulusResult& solved);

/// Fractional tree packing (the linear relaxative counterpart of the
/// quadratic program). Its optimal value equals the graph strength.
struct PackingSolution {
  Rational value;              // optimal packing total
  TreePmf broadcast_strategy;  // packing weights normalized to a pmf
  UsageVector usage;           // expected usage under that pmf
  int iterations = 0;          // columns generated
};

/// Solves the packing linear program by column generation over spanning
/// trees with a minimum-spanning-tree pricing step. The max-usage entry of
/// the result equals 1/value; the pmf is generally NOT an optimal broadcast
/// strategy for the game (it minimizes the worst edge, not the overlap).
PackingSolution solve_game_1mod(const Graph& g);

/// What happens when the sender just picks a uniformly random spanning tree:
/// per-edge usage tau(G/e)/tau(G), computed with exact determinant counts.
struct UniformUsageReport {
  UsageVector usage;
  double max_usage = 0.0;
  std::uint64_t tree_count = 0;                 // tau(G)
  std::vector<std::uint64_t> trees_containing;  // tau(G/e) per edge
};

UniformUsageReport evaluate_uniform_strategy(const Graph& g);

}  // namespace treemod
