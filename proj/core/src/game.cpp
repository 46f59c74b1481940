#include "treemod/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

#include "treemod/errors.hpp"

namespace treemod {

namespace {

// Component label per vertex after deleting the marked edges.
std::vector<int> components_without(const Graph& g, const std::vector<char>& removed) {
  std::vector<int> comp(static_cast<size_t>(g.vertex_count()), -1);
  int next = 0;
  for (int root = 0; root < g.vertex_count(); ++root) {
    if (comp[static_cast<size_t>(root)] >= 0) continue;
    comp[static_cast<size_t>(root)] = next;
    std::queue<int> frontier;
    frontier.push(root);
    while (!frontier.empty()) {
      int v = frontier.front();
      frontier.pop();
      for (auto [id, to] : g.incident(v)) {
        if (removed[static_cast<size_t>(id)]) continue;
        if (comp[static_cast<size_t>(to)] < 0) {
          comp[static_cast<size_t>(to)] = next;
          frontier.push(to);
        }
      }
    }
    ++next;
  }
  return comp;
}

int crossings(const SpanningTree& t, const std::vector<int>& sorted_edge_set) {
  int count = 0;
  for (int id : t.edge_ids()) {
    if (std::binary_search(sorted_edge_set.begin(), sorted_edge_set.end(), id)) ++count;
  }
  return count;
}

}  // namespace

void validate_edge_pmf(const EdgePmf& v, int edge_count, double tol) {
  if (v.entries.size() != static_cast<size_t>(edge_count)) {
    throw std::invalid_argument("edge pmf length does not match the edge count");
  }
  double total = 0.0;
  for (double p : v.entries) {
    if (!(p >= 0.0)) throw std::invalid_argument("edge pmf has a negative probability");
    total += p;
  }
  if (std::fabs(total - 1.0) > tol) {
    throw std::invalid_argument("edge pmf mass is " + std::to_string(total) + ", expected 1");
  }
}

FeasiblePartition extract_partition(const Graph& g, const RationalUsage& eta) {
  const int edge_count = g.edge_count();
  if (eta.values.size() != static_cast<size_t>(edge_count)) {
    throw std::invalid_argument("usage length does not match the edge count");
  }
  if (edge_count < 1) throw std::invalid_argument("graph has no edges");

  Rational top = eta.values[0];
  for (const Rational& r : eta.values) top = std::max(top, r);

  FeasiblePartition out;
  std::vector<char> removed(static_cast<size_t>(edge_count), 0);
  for (int id = 0; id < edge_count; ++id) {
    if (eta.values[static_cast<size_t>(id)] == top) {
      removed[static_cast<size_t>(id)] = 1;
      out.edge_set.push_back(id);
    }
  }

  std::vector<int> comp = components_without(g, removed);
  out.part_count = 1 + *std::max_element(comp.begin(), comp.end());
  if (out.part_count < 2) {
    throw SolverError("edges of maximal usage do not disconnect the graph; "
                      "the usage vector is not an optimum");
  }
  for (int id : out.edge_set) {
    const Edge& e = g.edge(id);
    if (comp[static_cast<size_t>(e.u)] == comp[static_cast<size_t>(e.v)]) {
      throw SolverError("a maximal-usage edge lies inside a part; "
                        "the usage vector is not an optimum");
    }
  }

  // BFS labels components in order of their smallest vertex, and scanning
  // vertices in order fills each part ascending, so the layout is canonical.
  out.parts.assign(static_cast<size_t>(out.part_count), {});
  for (int v = 0; v < g.vertex_count(); ++v) {
    out.parts[static_cast<size_t>(comp[static_cast<size_t>(v)])].push_back(v);
  }

  out.weight = Rational(static_cast<long long>(out.edge_set.size()), out.part_count - 1);
  if (out.weight != top.reciprocal()) {
    throw SolverError("partition weight " + out.weight.str() +
                      " does not invert the maximal usage " + top.str());
  }
  return out;
}

Rational strength(const Graph& g, double tol) {
  ModulusResult solved = compute_modulus(g, tol);
  RationalUsage eta = exact_round(solved.eta_star, g.edge_count());
  return extract_partition(g, eta).weight;
}

GameSolution solve_game(const Graph& g, double tol) {
  ModulusResult solved = compute_modulus(g, tol);
  RationalUsage eta = exact_round(solved.eta_star, g.edge_count());
  FeasiblePartition partition = extract_partition(g, eta);

  GameSolution out;
  out.partition = partition;
  out.value = partition.weight.reciprocal();
  out.broadcast_strategy = solved.mu_star;

  const auto cut_size = static_cast<long long>(partition.edge_set.size());
  out.interdiction_strategy.entries.assign(static_cast<size_t>(g.edge_count()), 0.0);
  for (int id : partition.edge_set) {
    out.interdiction_strategy.entries[static_cast<size_t>(id)] =
        1.0 / static_cast<double>(cut_size);
  }

  // Exact certificate. Under 0/1 weights on the crossing set, a tree's
  // length is its number of crossings, so a minimum spanning tree minimizes
  // that count exactly — floats only ever hold small integers here.
  Density indicator;
  indicator.values.assign(static_cast<size_t>(g.edge_count()), 0.0);
  for (int id : partition.edge_set) indicator.values[static_cast<size_t>(id)] = 1.0;
  MstResult fewest = min_spanning_tree(g, indicator);
  long long min_crossings = std::llround(fewest.length);
  if (min_crossings != partition.part_count - 1) {
    throw SolverError("some spanning tree crosses the partition fewer than part_count - 1 times");
  }

  out.certificate.shortest_tree_length = Rational(min_crossings, cut_size);
  out.certificate.max_usage = out.value;
  out.certificate.witness_tree = fewest.tree;
  if (out.certificate.shortest_tree_length < out.certificate.max_usage) {
    throw SolverError("equilibrium certificate failed: shortest tree beats the max usage");
  }

  // Support condition for the sender: every tree it plays must meet the
  // crossing set the minimal number of times.
  for (const auto& [tree, p] : out.broadcast_strategy.entries) {
    if (crossings(tree, partition.edge_set) != partition.part_count - 1) {
      throw SolverError("an optimal tree crosses the partition more than part_count - 1 times");
    }
  }

  // And a floating-point audit of the full pair, for good measure.
  EquilibriumCheck audit = verify_equilibrium(g, out.broadcast_strategy,
                                              out.interdiction_strategy, std::max(tol, 1e-9));
  if (!audit.is_equilibrium || !audit.broadcast_support_ok || !audit.interdiction_support_ok) {
    throw SolverError("floating-point equilibrium audit failed on the solved pair");
  }
  return out;
}

EquilibriumCheck verify_equilibrium(const Graph& g, const TreePmf& u, const EdgePmf& v,
                                    double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("tolerance must be nonnegative");
  // User-supplied strategies arrive with decimal roundoff; accept mass
  // within 1e-9 rather than the 1e-12 we hold our own pmfs to.
  validate_tree_pmf(u, g, 1e-9);
  validate_edge_pmf(v, g.edge_count(), 1e-9);

  UsageVector usage = expected_usage(u, g.edge_count());

  EquilibriumCheck out;
  out.max_usage = *std::max_element(usage.values.begin(), usage.values.end());

  MstResult shortest = min_spanning_tree(g, Density{v.entries});
  out.shortest_tree_length = shortest.length;
  out.witness_tree = shortest.tree;
  out.is_equilibrium = shortest.length >= out.max_usage - tol;

  auto tree_length = [&](const SpanningTree& t) {
    double len = 0.0;
    for (int id : t.edge_ids()) len += v.entries[static_cast<size_t>(id)];
    return len;
  };
  out.broadcast_support_ok = true;
  for (const auto& [tree, p] : u.entries) {
    if (p > 0.0 && tree_length(tree) > shortest.length + tol) {
      out.broadcast_support_ok = false;
      break;
    }
  }
  out.interdiction_support_ok = true;
  for (size_t id = 0; id < v.entries.size(); ++id) {
    if (v.entries[id] > 0.0 && usage.values[id] < out.max_usage - tol) {
      out.interdiction_support_ok = false;
      break;
    }
  }
  return out;
}

HomogeneityReport check_homogeneity(const Graph& g, const ModulusResult& solved) {
  RationalUsage eta = exact_round(solved.eta_star, g.edge_count());
  HomogeneityReport out;
  out.uniform_value = Rational(g.vertex_count() - 1, g.edge_count());
  out.homogeneous = std::all_of(eta.values.begin(), eta.values.end(),
                                [&](const Rational& r) { return r == eta.values[0]; });
  if (out.homogeneous && eta.values[0] != out.uniform_value) {
    throw SolverError("constant usage " + eta.values[0].str() + " differs from the forced value " +
                      out.uniform_value.str());
  }
  return out;
}

namespace {

struct LpOutcome {
  std::vector<double> x;      // packing weight per column
  double objective = 0.0;
  std::vector<double> duals;  // price per edge row
  int pivots = 0;
};

// Dense tableau simplex with Bland's rule for
//     max 1^T x   s.t.   M x <= 1,  x >= 0,
// M being the edge-by-tree incidence of the column set. The right-hand side
// is strictly positive, so the slack basis starts feasible, and Bland's rule
// keeps the walk finite and deterministic. Sizes here are desk scale; no
// attempt at revised-simplex cleverness.
LpOutcome solve_packing_lp(const Graph& g, const std::vector<SpanningTree>& cols) {
  const int rows = g.edge_count();
  const int vars = static_cast<int>(cols.size());
  const int width = vars + rows + 1;  // structurals, slacks, rhs
  constexpr double kReducedCostTol = 1e-9;
  constexpr double kPivotTol = 1e-11;

  std::vector<std::vector<double>> t(static_cast<size_t>(rows),
                                     std::vector<double>(static_cast<size_t>(width), 0.0));
  std::vector<int> basis(static_cast<size_t>(rows));
  for (int i = 0; i < rows; ++i) {
    t[static_cast<size_t>(i)][static_cast<size_t>(vars + i)] = 1.0;
    t[static_cast<size_t>(i)][static_cast<size_t>(width - 1)] = 1.0;
    basis[static_cast<size_t>(i)] = vars + i;
  }
  for (int j = 0; j < vars; ++j) {
    for (int id : cols[static_cast<size_t>(j)].edge_ids()) {
      t[static_cast<size_t>(id)][static_cast<size_t>(j)] = 1.0;
    }
  }
  // Reduced-cost row; its rhs cell accumulates minus the objective.
  std::vector<double> obj(static_cast<size_t>(width), 0.0);
  for (int j = 0; j < vars; ++j) obj[static_cast<size_t>(j)] = 1.0;

  LpOutcome out;
  const int pivot_cap = 200 * (rows + vars) + 1000;
  while (out.pivots < pivot_cap) {
    int enter = -1;
    for (int j = 0; j < width - 1; ++j) {  // Bland: lowest improving index
      if (obj[static_cast<size_t>(j)] > kReducedCostTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows; ++i) {
      double a = t[static_cast<size_t>(i)][static_cast<size_t>(enter)];
      if (a > kPivotTol) {
        double ratio = t[static_cast<size_t>(i)][static_cast<size_t>(width - 1)] / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && leave >= 0 &&
             basis[static_cast<size_t>(i)] < basis[static_cast<size_t>(leave)])) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) {
      throw SolverError("packing program is unbounded, which no graph can produce");
    }

    ++out.pivots;
    auto& prow = t[static_cast<size_t>(leave)];
    double pivot = prow[static_cast<size_t>(enter)];
    for (double& c : prow) c /= pivot;
    for (int i = 0; i < rows; ++i) {
      if (i == leave) continue;
      double f = t[static_cast<size_t>(i)][static_cast<size_t>(enter)];
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) {
        t[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * prow[static_cast<size_t>(j)];
      }
    }
    double f = obj[static_cast<size_t>(enter)];
    for (int j = 0; j < width; ++j) {
      obj[static_cast<size_t>(j)] -= f * prow[static_cast<size_t>(j)];
    }
    basis[static_cast<size_t>(leave)] = enter;
  }
  if (out.pivots >= pivot_cap) {
    throw SolverError("simplex hit its pivot cap on the packing program");
  }

  out.x.assign(static_cast<size_t>(vars), 0.0);
  for (int i = 0; i < rows; ++i) {
    if (basis[static_cast<size_t>(i)] < vars) {
      double w = t[static_cast<size_t>(i)][static_cast<size_t>(width - 1)];
      // Elimination roundoff can leave a basic variable a hair below zero;
      // anything materially negative means the walk went wrong.
      if (w < -1e-9) throw SolverError("packing solution has a negative weight");
      out.x[static_cast<size_t>(basis[static_cast<size_t>(i)])] = std::max(0.0, w);
    }
  }
  out.objective = -obj[static_cast<size_t>(width - 1)];
  out.duals.assign(static_cast<size_t>(rows), 0.0);
  for (int i = 0; i < rows; ++i) {
    // The reduced cost under slack i is -y_i at optimality.
    out.duals[static_cast<size_t>(i)] = std::max(0.0, -obj[static_cast<size_t>(vars + i)]);
  }
  return out;
}

}  // namespace

PackingSolution solve_game_1mod(const Graph& g) {
  const int n = g.vertex_count();
  const int edge_count = g.edge_count();
  if (n < 2 || edge_count < 1) {
    throw std::invalid_argument("packing needs at least two vertices and one edge");
  }

  std::vector<SpanningTree> cols;
  cols.push_back(
      min_spanning_tree(g, Density{std::vector<double>(static_cast<size_t>(edge_count), 1.0)})
          .tree);

  LpOutcome lp;
  const int cap = 50 * edge_count;
  int outer = 0;
  bool certified = false;
  while (outer < cap) {
    ++outer;
    lp = solve_packing_lp(g, cols);
    // Pricing: the dual prices form a density; a tree shorter than 1 under
    // them is a column with positive reduced cost.
    MstResult priced = min_spanning_tree(g, Density{lp.duals});
    if (priced.length >= 1.0 - 1e-9) {
      certified = true;
      break;
    }
    for (const SpanningTree& t : cols) {
      if (t == priced.tree) throw SolverError("column generation stalled on a repeated tree");
    }
    cols.push_back(priced.tree);
  }
  if (!certified) {
    throw SolverError("column generation hit the cap of " + std::to_string(cap) + " iterations");
  }

  PackingSolution out;
  out.iterations = outer;
  // The optimal packing total is a rational with denominator below the
  // vertex count; the simplex value is far more accurate than the window.
  auto value = Rational::approximate(
      lp.objective, n - 1, 1.0 / (2.0 * static_cast<double>(n - 1) * static_cast<double>(n - 1)));
  if (!value) {
    throw SolverError("packing value " + std::to_string(lp.objective) +
                      " failed to round to a small rational");
  }
  out.value = *value;
  out.broadcast_strategy = extract_pmf(lp.x, cols);
  out.usage = expected_usage(out.broadcast_strategy, edge_count);

  double top = *std::max_element(out.usage.values.begin(), out.usage.values.end());
  if (std::fabs(top * lp.objective - 1.0) > 1e-6) {
    throw SolverError("packing optimum violates the max-usage identity");
  }
  return out;
}

namespace {

// G/e: endpoints merged, parallel copies of e dropped as self-loops, every
// other edge kept (multiplicities matter for the counts).
Graph contract_edge(const Graph& g, int edge_id) {
  const Edge& e = g.edge(edge_id);
  const int keep = std::min(e.u, e.v);
  const int gone = std::max(e.u, e.v);
  auto relabel = [&](int v) {
    if (v == gone) return keep;
    return v > gone ? v - 1 : v;
  };
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(g.edge_count()) - 1);
  for (const Edge& f : g.edges()) {
    int u = relabel(f.u), v = relabel(f.v);
    if (u == v) continue;
    edges.push_back({u, v});
  }
  return Graph(g.vertex_count() - 1, std::move(edges));
}

}  // namespace

UniformUsageReport evaluate_uniform_strategy(const Graph& g) {
  if (g.vertex_count() < 2 || g.edge_count() < 1) {
    throw std::invalid_argument("uniform strategy needs at least two vertices and one edge");
  }
  UniformUsageReport out;
  out.tree_count = count_spanning_trees(g);
  out.usage.values.reserve(static_cast<size_t>(g.edge_count()));
  out.trees_containing.reserve(static_cast<size_t>(g.edge_count()));

  unsigned __int128 containing_total = 0;
  for (int id = 0; id < g.edge_count(); ++id) {
    // Trees through e correspond one-to-one to spanning trees of G/e.
    std::uint64_t through = count_spanning_trees(contract_edge(g, id));
    out.trees_containing.push_back(through);
    out.usage.values.push_back(static_cast<double>(through) / static_cast<double>(out.tree_count));
    containing_total += through;
  }
  // Every tree holds exactly vertex_count - 1 edges, so the per-edge counts
  // tile the tree set that many times over.
  if (containing_total !=
      static_cast<unsigned __int128>(out.tree_count) *
          static_cast<unsigned>(g.vertex_count() - 1)) {
    throw std::logic_error("per-edge tree counts are inconsistent with the total");
  }
  out.max_usage = *std::max_element(out.usage.values.begin(), out.usage.values.end());
  return out;
}

}  // namespace treemod
