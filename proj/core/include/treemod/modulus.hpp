#pragma once

#include <map>
#include <vector>

#include "treemod/graph.hpp"
#include "treemod/rational.hpp"

namespace treemod {

/// Probability mass function over spanning trees. Keys must be spanning trees
/// of the graph in question; values are nonnegative and sum to 1 (within
/// 1e-12 for pmfs we construct ourselves).
struct TreePmf {
  std::map<SpanningTree, double> entries;

  double prob(const SpanningTree& t) const {
    auto it = entries.find(t);
    return it == entries.end() ? 0.0 : it->second;
  }
};

/// Throws std::invalid_argument unless every key is a spanning tree of g,
/// every value is nonnegative, and the total mass is 1 within `tol`.
void validate_tree_pmf(const TreePmf& mu, const Graph& g, double tol = 1e-12);

/// Per-edge expected usage under a tree pmf, indexed by edge id.
struct UsageVector {
  std::vector<double> values;
};

/// N^T mu: usage(e) = sum of mu over trees containing e.
UsageVector expected_usage(const TreePmf& mu, int edge_count);

/// Expected overlap of two independent draws from mu: the sum over edges of
/// usage(e)^2. This is the quantity the broadcaster is trying to minimize.
double expected_overlap(const TreePmf& mu);

/// Solution of the restricted quadratic program over a finite list of tree
/// rows: minimize sum rho(e)^2 subject to rho >= 0 and, for every row tree,
/// sum of rho over its edges >= 1.
struct RestrictedQpResult {
  Density rho;                 // optimal density
  std::vector<double> lambda;  // KKT multiplier per input row (nonnegative)
  double energy;               // sum rho^2 at the optimum
  int iterations;              // active-set iterations spent
};

/// Solves the restricted program exactly (KKT residuals at the 1e-10 scale).
/// `warm_lambda`, when given, must have one entry per row and seeds the
/// active set from a previous solve — the standard use is handing back the
/// multipliers from the last outer iteration with 0 appended for the new row.
RestrictedQpResult solve_qp_restricted(const Graph& g, const std::vector<SpanningTree>& rows,
                                       const std::vector<double>* warm_lambda = nullptr);

/// Normalizes KKT multipliers into a pmf over the rows carrying positive
/// mass. Multipliers whose share of the total is at roundoff scale (below
/// 1e-12) are dropped and the rest renormalized, so the support contains
/// only genuine trees. Throws std::invalid_argument if all multipliers are
/// zero or any is negative.
TreePmf extract_pmf(const std::vector<double>& lambda, const std::vector<SpanningTree>& rows);

/// Everything compute_modulus certifies about a graph.
struct ModulusResult {
  double mod2 = 0.0;        // value of the quadratic program
  Density rho_star;         // optimal density (unique)
  UsageVector eta_star;     // optimal expected usage, eta* = rho*/mod2 (unique)
  TreePmf mu_star;          // one optimal tree pmf (not unique in general)
  std::vector<SpanningTree> active_trees;  // rows generated along the way
  int iterations = 0;       // outer (constraint-generation) iterations
  double tolerance_used = 0.0;
};

/// Computes the 2-modulus of the spanning-tree family by exterior-point
/// constraint generation: solve the restricted program, ask a minimum
/// spanning tree under the current density for the most violated constraint,
/// stop once the shortest tree has length >= 1 - tol.
///
/// tol must lie in (0, 1e-4]. max_outer_iterations of 0 means the default
/// cap of 50 * edge_count. Throws SolverError if the cap is hit, the inner
/// solver fails, or a certified identity (monotone energies, dual
/// normalization, usage sum) breaks.
ModulusResult compute_modulus(const Graph& g, double tol = 1e-9, int max_outer_iterations = 0);

/// Edge usage as exact rationals.
struct RationalUsage {
  std::vector<Rational> values;
};

/// Rounds a floating-point usage vector to exact rationals, relying on the
/// structure of optimal usage: every entry is p/q with q <= edge_count, and
/// distinct such rationals are at least 1/edge_count^2 apart, so a rounding
/// window of 1/(2*edge_count^2) identifies each entry uniquely. Verifies the
/// rounded entries lie in [0,1] and sum to the integer the float entries sum
/// to (the vertex count minus one, for a genuine usage vector). Throws
/// SolverError if an entry sits outside every window or the sum check fails.
RationalUsage exact_round(const UsageVector& eta, int edge_count);

}  // namespace treemod
