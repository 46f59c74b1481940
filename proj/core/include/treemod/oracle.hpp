#pragma once

#include <cstdint>

#include "treemod/game.hpp"
#include "treemod/modulus.hpp"

namespace treemod {

/// Brute-force counterparts of the solver, built on full enumeration. They
/// share as little code with the fast paths as possible — the point is to be
/// an independent witness, not to be quick.

struct OverlapMinimum {
  TreePmf pmf;
  double value = 0.0;  // minimal expected overlap of two independent draws
  int iterations = 0;
};

/// Minimizes the expected overlap over the full tree simplex by pairwise
/// conditional-gradient steps with exact line search, run to a duality gap
/// below 1e-11 (so the usage vector is within ~1e-5 of optimal per edge).
/// Enumerates every spanning tree up front; throws CapExceeded when the
/// graph has more than tree_cap of them.
OverlapMinimum oracle_meo(const Graph& g, std::uint64_t tree_cap = 200);

struct StrengthCertificate {
  Rational weight;  // exact minimum over all feasible partitions
  FeasiblePartition partition;
};

/// Exhaustively scans every partition of the vertex set (restricted growth
/// strings), keeps the feasible ones, and returns the exact minimizer. Ties
/// break toward fewer parts, then lexicographically smaller part lists.
/// Throws CapExceeded when the graph has more than vertex_cap vertices.
StrengthCertificate oracle_strength(const Graph& g, int vertex_cap = 10);

struct OracleReport {
  double min_expected_overlap = 0.0;
  double mod2 = 0.0;  // reciprocal of the overlap minimum
  Rational strength_value;
  FeasiblePartition strength_partition;
  std::uint64_t tree_count = 0;
};

/// Runs both oracles and packages their results.
OracleReport oracle_report(const Graph& g, std::uint64_t tree_cap = 200, int vertex_cap = 10);

}  // namespace treemod
