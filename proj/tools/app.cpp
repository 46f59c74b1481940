#include "app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "treemod/errors.hpp"
#include "treemod/game.hpp"
#include "treemod/graph.hpp"
#include "treemod/modulus.hpp"
#include "treemod/oracle.hpp"
#include "treemod/rational.hpp"

namespace treemod::app {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(ParseError::Kind::EmptyInput, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json graph_json(const Graph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  return json{{"vertices", g.vertex_count()},
              {"edges", g.edge_count()},
              {"edge_list", edges},
              {"vertex_labels", g.vertex_labels()}};
}

json tree_json(const SpanningTree& t) { return json(t.edge_ids()); }

// Pmf rows ordered by descending probability, then lexicographically by
// edge set, so reports are stable however the map iterates.
json pmf_json(const TreePmf& mu) {
  std::vector<std::pair<const SpanningTree*, double>> rows;
  rows.reserve(mu.entries.size());
  for (const auto& [tree, p] : mu.entries) rows.emplace_back(&tree, p);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return *a.first < *b.first;
  });
  json out = json::array();
  for (const auto& [tree, p] : rows) out.push_back({{"edges", tree_json(*tree)}, {"prob", p}});
  return out;
}

json partition_json(const FeasiblePartition& p) {
  return json{{"parts", p.parts},
              {"part_count", p.part_count},
              {"edge_set", p.edge_set},
              {"weight", p.weight.str()}};
}

std::string partition_text(const FeasiblePartition& p) {
  return "k=" + std::to_string(p.part_count) +
         ", |E_Q|=" + std::to_string(p.edge_set.size()) + ", weight " + p.weight.str();
}

void print_graph_line(std::ostream& out, const Graph& g) {
  out << "graph: " << g.vertex_count() << " vertices, " << g.edge_count() << " edges\n";
}

// ---- oracle cross-check (shared by modulus / game / strength / uniform) ----

struct OracleCheck {
  bool ran = false;
  bool ok = true;
  std::string detail;
};

OracleCheck run_oracle_check(const Graph& g, const RunConfig& cfg, const double* solver_mod2,
                             const Rational* solver_strength) {
  OracleCheck out;
  try {
    if (solver_mod2) {
      OverlapMinimum meo = oracle_meo(g, cfg.cap_trees);
      double oracle_mod2 = 1.0 / meo.value;
      double diff = std::fabs(*solver_mod2 - oracle_mod2);
      out.ran = true;
      if (diff > 1e-6) {
        out.ok = false;
        out.detail = "mod2 mismatch: solver " + fmt(*solver_mod2) + " vs oracle " +
                     fmt(oracle_mod2);
        return out;
      }
      out.detail = "mod2 match (|diff| = " + fmt(diff) + ")";
    }
    if (solver_strength) {
      StrengthCertificate sc = oracle_strength(g, cfg.cap_vertices);
      out.ran = true;
      if (sc.weight != *solver_strength) {
        out.ok = false;
        out.detail = (out.detail.empty() ? "" : out.detail + "; ") + std::string("strength mismatch: solver ") +
                     solver_strength->str() + " vs oracle " + sc.weight.str();
        return out;
      }
      out.detail += (out.detail.empty() ? "" : "; ") + std::string("strength match (") +
                    sc.weight.str() + ")";
    }
  } catch (const CapExceeded& e) {
    out.ran = false;
    out.ok = true;  // a skipped check is not a failure
    out.detail = std::string("skipped: ") + e.what();
  }
  return out;
}

json oracle_check_json(const OracleCheck& c) {
  return json{{"ran", c.ran}, {"ok", c.ok}, {"detail", c.detail}};
}

// ---- per-command emitters ----

int emit_modulus(const RunConfig& cfg, const Graph& g, std::ostream& out, std::ostream& err) {
  ModulusResult r = compute_modulus(g, cfg.tol);
  RationalUsage exact = exact_round(r.eta_star, g.edge_count());
  Rational usage_max = exact.values[0];
  for (const Rational& v : exact.values) usage_max = std::max(usage_max, v);

  OracleCheck check;
  if (cfg.oracle_check) check = run_oracle_check(g, cfg, &r.mod2, nullptr);

  if (cfg.output == OutputMode::Json) {
    json usage_exact = json::array();
    for (const Rational& v : exact.values) usage_exact.push_back(v.str());
    json doc{{"schema_version", 1},
             {"command", "modulus"},
             {"graph", graph_json(g)},
             {"mod2", r.mod2},
             {"rho", r.rho_star.values},
             {"usage", r.eta_star.values},
             {"usage_exact", usage_exact},
             {"usage_max", usage_max.str()},
             {"pmf", pmf_json(r.mu_star)},
             {"iterations", r.iterations},
             {"tolerance", r.tolerance_used}};
    if (cfg.oracle_check) doc["oracle_check"] = oracle_check_json(check);
    out << doc.dump(2) << "\n";
  } else {
    print_graph_line(out, g);
    out << "mod2: " << fmt(r.mod2) << "\n";
    out << "usage max: " << usage_max.str() << "\n";
    out << "usage:";
    for (const Rational& v : exact.values) out << " " << v.str();
    out << "\n";
    out << "support: " << r.mu_star.entries.size() << " trees\n";
    out << "iterations: " << r.iterations << "\n";
    if (cfg.oracle_check) {
      out << "oracle check: " << check.detail << "\n";
    }
  }
  if (cfg.oracle_check && !check.ok) {
    err << "error: oracle cross-check failed: " << check.detail << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

int emit_game(const RunConfig& cfg, const Graph& g, std::ostream& out, std::ostream& err) {
  GameSolution sol = solve_game(g, cfg.tol);

  OracleCheck check;
  if (cfg.oracle_check) {
    Rational solver_strength = sol.value.reciprocal();
    check = run_oracle_check(g, cfg, nullptr, &solver_strength);
  }

  if (cfg.output == OutputMode::Json) {
    json doc{{"schema_version", 1},
             {"command", "game"},
             {"graph", graph_json(g)},
             {"value", sol.value.str()},
             {"value_decimal", sol.value.to_double()},
             {"usage_max", sol.certificate.max_usage.str()},
             {"partition", partition_json(sol.partition)},
             {"broadcast_strategy", pmf_json(sol.broadcast_strategy)},
             {"interdiction_strategy", sol.interdiction_strategy.entries},
             {"certificate",
              json{{"shortest_tree_length", sol.certificate.shortest_tree_length.str()},
                   {"max_usage", sol.certificate.max_usage.str()},
                   {"witness_tree", tree_json(sol.certificate.witness_tree)},
                   {"holds", true}}}};
    if (cfg.oracle_check) doc["oracle_check"] = oracle_check_json(check);
    out << doc.dump(2) << "\n";
  } else {
    print_graph_line(out, g);
    out << "value: " << sol.value.str() << " (" << fmt(sol.value.to_double()) << ")\n";
    out << "usage max: " << sol.certificate.max_usage.str() << "\n";
    out << "partition: " << partition_text(sol.partition) << "\n";
    out << "broadcast support: " << sol.broadcast_strategy.entries.size() << " trees\n";
    out << "certificate: ℓ_v(Γ) = " << sol.certificate.shortest_tree_length.str()
        << " ≥ ‖η‖_∞ = " << sol.certificate.max_usage.str() << "\n";
    if (cfg.oracle_check) out << "oracle check: " << check.detail << "\n";
  }
  if (cfg.oracle_check && !check.ok) {
    err << "error: oracle cross-check failed: " << check.detail << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

int emit_strength(const RunConfig& cfg, const Graph& g, std::ostream& out, std::ostream& err) {
  ModulusResult r = compute_modulus(g, cfg.tol);
  RationalUsage exact = exact_round(r.eta_star, g.edge_count());
  FeasiblePartition part = extract_partition(g, exact);

  OracleCheck check;
  if (cfg.oracle_check) check = run_oracle_check(g, cfg, nullptr, &part.weight);

  if (cfg.output == OutputMode::Json) {
    json doc{{"schema_version", 1},
             {"command", "strength"},
             {"graph", graph_json(g)},
             {"strength", part.weight.str()},
             {"strength_decimal", part.weight.to_double()},
             {"partition", partition_json(part)}};
    if (cfg.oracle_check) doc["oracle_check"] = oracle_check_json(check);
    out << doc.dump(2) << "\n";
  } else {
    print_graph_line(out, g);
    out << "strength: " << part.weight.str() << " (" << fmt(part.weight.to_double()) << ")\n";
    out << "partition: " << partition_text(part) << "\n";
    out << "parts:";
    for (const auto& p : part.parts) {
      out << " [";
      for (size_t i = 0; i < p.size(); ++i) out << (i ? " " : "") << p[i];
      out << "]";
    }
    out << "\n";
    if (cfg.oracle_check) out << "oracle check: " << check.detail << "\n";
  }
  if (cfg.oracle_check && !check.ok) {
    err << "error: oracle cross-check failed: " << check.detail << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

// Strategy file: {"broadcast": [{"edges": [...], "prob": p}, ...],
//                 "interdiction": [p per edge id]}
void load_strategy(const std::string& path, const Graph& g, TreePmf& u, EdgePmf& v) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ParseError(ParseError::Kind::MalformedLine,
                     "strategy file '" + path + "': " + e.what());
  }
  if (!doc.is_object() || !doc.contains("broadcast") || !doc.contains("interdiction")) {
    throw ParseError(ParseError::Kind::MalformedLine,
                     "strategy file needs 'broadcast' and 'interdiction' keys");
  }

  double mass = 0.0;
  try {
    for (const json& row : doc.at("broadcast")) {
      std::vector<int> ids = row.at("edges").get<std::vector<int>>();
      double p = row.at("prob").get<double>();
      if (p < 0.0) {
        throw ParseError(ParseError::Kind::MalformedLine, "negative broadcast probability");
      }
      SpanningTree t(std::move(ids));
      if (!is_spanning_tree(g, t)) {
        throw ParseError(ParseError::Kind::MalformedLine,
                         "broadcast row is not a spanning tree of the graph");
      }
      u.entries[t] += p;
      mass += p;
    }
    v.entries = doc.at("interdiction").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ParseError(ParseError::Kind::MalformedLine,
                     "strategy file '" + path + "': " + e.what());
  }

  if (std::fabs(mass - 1.0) > 1e-9 || mass <= 0.0) {
    throw ParseError(ParseError::Kind::MalformedLine,
                     "broadcast probabilities sum to " + fmt(mass) + ", expected 1");
  }
  for (auto& [tree, p] : u.entries) p /= mass;  // shed decimal roundoff

  if (v.entries.size() != static_cast<size_t>(g.edge_count())) {
    throw ParseError(ParseError::Kind::MalformedLine,
                     "interdiction vector length does not match the edge count");
  }
  double vmass = 0.0;
  for (double p : v.entries) {
    if (p < 0.0) {
      throw ParseError(ParseError::Kind::MalformedLine, "negative interdiction probability");
    }
    vmass += p;
  }
  if (std::fabs(vmass - 1.0) > 1e-9 || vmass <= 0.0) {
    throw ParseError(ParseError::Kind::MalformedLine,
                     "interdiction probabilities sum to " + fmt(vmass) + ", expected 1");
  }
  for (double& p : v.entries) p /= vmass;
}

int emit_verify(const RunConfig& cfg, const Graph& g, std::ostream& out, std::ostream& err) {
  if (cfg.strategy_path.empty()) {
    throw ParseError(ParseError::Kind::MalformedLine, "verify needs --strategy <file>");
  }
  TreePmf u;
  EdgePmf v;
  load_strategy(cfg.strategy_path, g, u, v);
  EquilibriumCheck check = verify_equilibrium(g, u, v, cfg.tol);

  if (cfg.output == OutputMode::Json) {
    json doc{{"schema_version", 1},
             {"command", "verify"},
             {"graph", graph_json(g)},
             {"is_equilibrium", check.is_equilibrium},
             {"shortest_tree_length", check.shortest_tree_length},
             {"max_usage", check.max_usage},
             {"witness_tree", tree_json(check.witness_tree)},
             {"broadcast_support_ok", check.broadcast_support_ok},
             {"interdiction_support_ok", check.interdiction_support_ok},
             {"tolerance", cfg.tol}};
    out << doc.dump(2) << "\n";
  } else {
    print_graph_line(out, g);
    out << "shortest tree length: " << fmt(check.shortest_tree_length) << "\n";
    out << "max usage: " << fmt(check.max_usage) << "\n";
    out << "witness tree:";
    for (int id : check.witness_tree.edge_ids()) out << " " << id;
    out << "\n";
    out << "broadcast support ok: " << (check.broadcast_support_ok ? "yes" : "no") << "\n";
    out << "interdiction support ok: " << (check.interdiction_support_ok ? "yes" : "no") << "\n";
    out << "equilibrium: " << (check.is_equilibrium ? "yes" : "no") << "\n";
  }
  if (!check.is_equilibrium) {
    err << "error: the strategy pair is not an equilibrium (shortest tree "
        << fmt(check.shortest_tree_length) << " < max usage " << fmt(check.max_usage) << ")\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

int emit_homogeneity(const RunConfig& cfg, const Graph& g, std::ostream& out, std::ostream&) {
  ModulusResult r = compute_modulus(g, cfg.tol);
  HomogeneityReport rep = check_homogeneity(g, r);
  RationalUsage exact = exact_round(r.eta_star, g.edge_count());

  if (cfg.output == OutputMode::Json) {
    json usage_exact = json::array();
    for (const Rational& v : exact.values) usage_exact.push_back(v.str());
    json doc{{"schema_version", 1},
             {"command", "homogeneity"},
             {"graph", graph_json(g)},
             {"homogeneous", rep.homogeneous},
             {"uniform_value", rep.uniform_value.str()},
             {"usage_exact", usage_exact},
             {"mod2", r.mod2}};
    out << doc.dump(2) << "\n";
  } else {
    print_graph_line(out, g);
    out << "homogeneous: " << (rep.homogeneous ? "yes" : "no") << "\n";
    out << "uniform value: " << rep.uniform_value.str() << "\n";
    out << "mod2: " << fmt(r.mod2) << "\n";
  }
  return kExitOk;
}

int emit_uniform(const RunConfig& cfg, const Graph& g, std::ostream& out, std::ostream& err) {
  UniformUsageReport rep = evaluate_uniform_strategy(g);

  // The exact per-edge usage is trees_containing/tree_count; show it that way.
  std::vector<int> max_edges;
  for (int id = 0; id < g.edge_count(); ++id) {
    if (rep.trees_containing[static_cast<size_t>(id)] ==
        *std::max_element(rep.trees_containing.begin(), rep.trees_containing.end())) {
      max_edges.push_back(id);
    }
  }

  OracleCheck check;
  if (cfg.oracle_check) {
    // Independent route: enumerate the trees and count memberships directly.
    try {
      std::vector<SpanningTree> trees = enumerate_spanning_trees(g, cfg.cap_trees);
      std::vector<std::uint64_t> counted(static_cast<size_t>(g.edge_count()), 0);
      for (const SpanningTree& t : trees) {
        for (int id : t.edge_ids()) ++counted[static_cast<size_t>(id)];
      }
      check.ran = true;
      check.ok = counted == rep.trees_containing &&
                 trees.size() == static_cast<size_t>(rep.tree_count);
      check.detail = check.ok ? "per-edge tree counts match the enumeration"
                              : "per-edge tree counts disagree with the enumeration";
    } catch (const CapExceeded& e) {
      check.ran = false;
      check.detail = std::string("skipped: ") + e.what();
    }
  }

  if (cfg.output == OutputMode::Json) {
    json usage_exact = json::array();
    for (int id = 0; id < g.edge_count(); ++id) {
      usage_exact.push_back(
          Rational(static_cast<long long>(rep.trees_containing[static_cast<size_t>(id)]),
                   static_cast<long long>(rep.tree_count))
              .str());
    }
    json doc{{"schema_version", 1},
             {"command", "uniform"},
             {"graph", graph_json(g)},
             {"tree_count", rep.tree_count},
             {"trees_containing", rep.trees_containing},
             {"usage", rep.usage.values},
             {"usage_exact", usage_exact},
             {"usage_max", rep.max_usage},
             {"usage_max_edges", max_edges}};
    if (cfg.oracle_check) doc["oracle_check"] = oracle_check_json(check);
    out << doc.dump(2) << "\n";
  } else {
    print_graph_line(out, g);
    out << "tree count: " << rep.tree_count << "\n";
    out << "usage:";
    for (int id = 0; id < g.edge_count(); ++id) {
      out << " "
          << Rational(static_cast<long long>(rep.trees_containing[static_cast<size_t>(id)]),
                      static_cast<long long>(rep.tree_count))
                 .str();
    }
    out << "\n";
    out << "usage max: " << fmt(rep.max_usage) << " on edges";
    for (int id : max_edges) out << " " << id;
    out << "\n";
    if (cfg.oracle_check) out << "oracle check: " << check.detail << "\n";
  }
  if (cfg.oracle_check && !check.ok) {
    err << "error: oracle cross-check failed: " << check.detail << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

int emit_oracle(const RunConfig& cfg, const Graph& g, std::ostream& out, std::ostream&) {
  OracleReport rep = oracle_report(g, cfg.cap_trees, cfg.cap_vertices);

  if (cfg.output == OutputMode::Json) {
    json doc{{"schema_version", 1},
             {"command", "oracle"},
             {"graph", graph_json(g)},
             {"tree_count", rep.tree_count},
             {"min_expected_overlap", rep.min_expected_overlap},
             {"mod2", rep.mod2},
             {"strength", rep.strength_value.str()},
             {"partition", partition_json(rep.strength_partition)}};
    out << doc.dump(2) << "\n";
  } else {
    print_graph_line(out, g);
    out << "tree count: " << rep.tree_count << "\n";
    out << "min expected overlap: " << fmt(rep.min_expected_overlap) << "\n";
    out << "mod2 (oracle): " << fmt(rep.mod2) << "\n";
    out << "strength (oracle): " << rep.strength_value.str() << "\n";
    out << "partition: " << partition_text(rep.strength_partition) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    Graph g = parse_graph(read_file(cfg.graph_path));
    switch (cfg.command) {
      case Command::Modulus:
        return emit_modulus(cfg, g, out, err);
      case Command::Game:
        return emit_game(cfg, g, out, err);
      case Command::Strength:
        return emit_strength(cfg, g, out, err);
      case Command::Verify:
        return emit_verify(cfg, g, out, err);
      case Command::Homogeneity:
        return emit_homogeneity(cfg, g, out, err);
      case Command::Uniform:
        return emit_uniform(cfg, g, out, err);
      case Command::Oracle:
        return emit_oracle(cfg, g, out, err);
    }
    err << "error: unknown command\n";
    return kExitParse;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitSolver;
  }
}

}  // namespace treemod::app
