#include "treemod/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "treemod/errors.hpp"

namespace treemod {

OverlapMinimum oracle_meo(const Graph& g, std::uint64_t tree_cap) {
  if (g.vertex_count() < 2 || g.edge_count() < 1) {
    throw std::invalid_argument("overlap oracle needs at least two vertices and one edge");
  }
  const std::vector<SpanningTree> trees = enumerate_spanning_trees(g, tree_cap);
  const int m = static_cast<int>(trees.size());
  const int edge_count = g.edge_count();

  std::vector<double> mu(static_cast<size_t>(m), 1.0 / static_cast<double>(m));
  std::vector<double> usage(static_cast<size_t>(edge_count), 0.0);
  auto rebuild_usage = [&]() {
    std::fill(usage.begin(), usage.end(), 0.0);
    for (int j = 0; j < m; ++j) {
      for (int id : trees[static_cast<size_t>(j)].edge_ids()) {
        usage[static_cast<size_t>(id)] += mu[static_cast<size_t>(j)];
      }
    }
  };
  rebuild_usage();

  // Pairwise conditional-gradient: in each round move mass from the worst
  // supported tree onto the best tree, with the exact minimizing step for
  // this quadratic. The duality gap 2*(overlap - shortest length) certifies
  // how far from optimal we still are. The tight target matters: the usage
  // vector's distance from the true optimum is bounded by the square root of
  // the gap, and comparisons downstream want usage good to ~1e-5.
  constexpr double kGapTarget = 1e-11;
  constexpr int kMaxRounds = 400000;
  OverlapMinimum out;
  bool converged = false;

  std::vector<double> lengths(static_cast<size_t>(m), 0.0);
  for (int round = 0; round < kMaxRounds; ++round) {
    if ((round & 0xfff) == 0xfff) rebuild_usage();  // shed incremental drift

    double overlap = 0.0;
    for (double u : usage) overlap += u * u;

    int best = 0, worst = -1;
    for (int j = 0; j < m; ++j) {
      double len = 0.0;
      for (int id : trees[static_cast<size_t>(j)].edge_ids()) {
        len += usage[static_cast<size_t>(id)];
      }
      lengths[static_cast<size_t>(j)] = len;
      if (len < lengths[static_cast<size_t>(best)]) best = j;
      if (mu[static_cast<size_t>(j)] > 0.0 &&
          (worst < 0 || len > lengths[static_cast<size_t>(worst)])) {
        worst = j;
      }
    }

    double gap = 2.0 * (overlap - lengths[static_cast<size_t>(best)]);
    if (gap < kGapTarget) {
      converged = true;
      out.iterations = round;
      break;
    }
    if (worst < 0 || worst == best) {
      throw SolverError("overlap oracle lost its descent direction before reaching the gap");
    }

    // Direction: indicator(best) - indicator(worst). Only the symmetric
    // difference of the two trees moves.
    double step_num = lengths[static_cast<size_t>(worst)] - lengths[static_cast<size_t>(best)];
    int sym_diff = 0;
    for (int id : trees[static_cast<size_t>(best)].edge_ids()) {
      if (!trees[static_cast<size_t>(worst)].contains(id)) ++sym_diff;
    }
    for (int id : trees[static_cast<size_t>(worst)].edge_ids()) {
      if (!trees[static_cast<size_t>(best)].contains(id)) ++sym_diff;
    }
    double step = step_num / static_cast<double>(sym_diff);
    step = std::min(step, mu[static_cast<size_t>(worst)]);
    if (!(step > 0.0)) {
      throw SolverError("overlap oracle stalled with a nonpositive step");
    }

    mu[static_cast<size_t>(best)] += step;
    mu[static_cast<size_t>(worst)] -= step;
    if (mu[static_cast<size_t>(worst)] < 1e-17) mu[static_cast<size_t>(worst)] = 0.0;
    for (int id : trees[static_cast<size_t>(best)].edge_ids()) {
      if (!trees[static_cast<size_t>(worst)].contains(id)) {
        usage[static_cast<size_t>(id)] += step;
      }
    }
    for (int id : trees[static_cast<size_t>(worst)].edge_ids()) {
      if (!trees[static_cast<size_t>(best)].contains(id)) {
        usage[static_cast<size_t>(id)] -= step;
      }
    }
  }
  if (!converged) {
    throw SolverError("overlap oracle did not reach its duality-gap target in " +
                      std::to_string(kMaxRounds) + " rounds");
  }

  rebuild_usage();
  out.value = 0.0;
  for (double u : usage) out.value += u * u;

  double kept_mass = 0.0;
  for (int j = 0; j < m; ++j) {
    if (mu[static_cast<size_t>(j)] > 1e-15) kept_mass += mu[static_cast<size_t>(j)];
  }
  for (int j = 0; j < m; ++j) {
    if (mu[static_cast<size_t>(j)] > 1e-15) {
      out.pmf.entries[trees[static_cast<size_t>(j)]] = mu[static_cast<size_t>(j)] / kept_mass;
    }
  }
  return out;
}

namespace {

struct PartitionScan {
  const Graph& g;
  std::vector<int> label;          // part index per vertex, a restricted growth string
  bool have_best = false;
  Rational best_weight;
  int best_parts = 0;
  std::vector<std::vector<int>> best_layout;

  explicit PartitionScan(const Graph& graph)
      : g(graph), label(static_cast<size_t>(graph.vertex_count()), 0) {}

  void consider() {
    const int k = 1 + *std::max_element(label.begin(), label.end());
    if (k < 2) return;

    // Every part must induce a connected subgraph: walk each part from its
    // first vertex; any later vertex of the same part that the walk missed
    // means the part is split.
    std::vector<char> started(static_cast<size_t>(k), 0);
    std::vector<char> seen(static_cast<size_t>(g.vertex_count()), 0);
    for (int v = 0; v < g.vertex_count(); ++v) {
      int part = label[static_cast<size_t>(v)];
      if (started[static_cast<size_t>(part)]) {
        if (!seen[static_cast<size_t>(v)]) return;
        continue;
      }
      started[static_cast<size_t>(part)] = 1;
      std::vector<int> stack{v};
      seen[static_cast<size_t>(v)] = 1;
      while (!stack.empty()) {
        int w = stack.back();
        stack.pop_back();
        for (auto [id, to] : g.incident(w)) {
          if (label[static_cast<size_t>(to)] == part && !seen[static_cast<size_t>(to)]) {
            seen[static_cast<size_t>(to)] = 1;
            stack.push_back(to);
          }
        }
      }
    }

    long long cut = 0;
    for (const Edge& e : g.edges()) {
      if (label[static_cast<size_t>(e.u)] != label[static_cast<size_t>(e.v)]) ++cut;
    }
    Rational w(cut, k - 1);

    if (have_best) {
      if (w > best_weight) return;
      if (w == best_weight && k > best_parts) return;
    }
    std::vector<std::vector<int>> layout(static_cast<size_t>(k));
    for (int v = 0; v < g.vertex_count(); ++v) {
      layout[static_cast<size_t>(label[static_cast<size_t>(v)])].push_back(v);
    }
    if (have_best && w == best_weight && k == best_parts && layout >= best_layout) return;

    have_best = true;
    best_weight = w;
    best_parts = k;
    best_layout = std::move(layout);
  }

  void recurse(int v, int used) {
    if (v == g.vertex_count()) {
      consider();
      return;
    }
    for (int c = 0; c <= used; ++c) {
      label[static_cast<size_t>(v)] = c;
      recurse(v + 1, std::max(used, c + 1));
    }
  }
};

}  // namespace

StrengthCertificate oracle_strength(const Graph& g, int vertex_cap) {
  if (g.vertex_count() < 2) {
    throw std::invalid_argument("strength oracle needs at least two vertices");
  }
  if (g.vertex_count() > vertex_cap) {
    throw CapExceeded("graph has " + std::to_string(g.vertex_count()) +
                      " vertices, above the cap of " + std::to_string(vertex_cap));
  }

  PartitionScan scan(g);
  scan.label[0] = 0;
  scan.recurse(1, 1);
  if (!scan.have_best) {
    throw std::logic_error("partition scan found nothing, which cannot happen for n >= 2");
  }

  StrengthCertificate out;
  out.weight = scan.best_weight;
  out.partition.parts = scan.best_layout;
  out.partition.part_count = scan.best_parts;
  out.partition.weight = scan.best_weight;
  std::vector<int> part_of(static_cast<size_t>(g.vertex_count()), -1);
  for (size_t p = 0; p < out.partition.parts.size(); ++p) {
    for (int v : out.partition.parts[p]) part_of[static_cast<size_t>(v)] = static_cast<int>(p);
  }
  for (int id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    if (part_of[static_cast<size_t>(e.u)] != part_of[static_cast<size_t>(e.v)]) {
      out.partition.edge_set.push_back(id);
    }
  }
  return out;
}

OracleReport oracle_report(const Graph& g, std::uint64_t tree_cap, int vertex_cap) {
  OracleReport out;
  OverlapMinimum meo = oracle_meo(g, tree_cap);
  out.min_expected_overlap = meo.value;
  out.mod2 = 1.0 / meo.value;
  out.tree_count = count_spanning_trees(g);
  StrengthCertificate sc = oracle_strength(g, vertex_cap);
  out.strength_value = sc.weight;
  out.strength_partition = sc.partition;
  return out;
}

}  // namespace treemod
