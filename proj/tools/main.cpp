#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "app.hpp"

using treemod::app::Command;
using treemod::app::OutputMode;
using treemod::app::RunConfig;

int main(int argc, char** argv) {
  CLI::App cli{"Spanning-tree modulus, broadcast game, and strength solver"};
  cli.require_subcommand(1);

  RunConfig cfg;
  std::string output = "text";

  auto add_common = [&](CLI::App* sub, bool takes_tol, bool takes_oracle) {
    sub->add_option("graph", cfg.graph_path, "edge-list file (two vertex labels per line)")
        ->required();
    sub->add_option("--output", output, "report format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    if (takes_tol) {
      cfg.tol = 1e-9;
      sub->add_option("--tol", cfg.tol, "admissibility tolerance, in (0, 1e-4]");
    }
    if (takes_oracle) {
      sub->add_flag("--oracle", cfg.oracle_check,
                    "cross-check the result against the brute-force oracles");
    }
    sub->add_option("--cap-trees", cfg.cap_trees, "tree-enumeration budget for oracle work");
    sub->add_option("--cap-vertices", cfg.cap_vertices, "vertex budget for the partition scan");
  };

  CLI::App* modulus = cli.add_subcommand("modulus", "2-modulus of the spanning-tree family");
  add_common(modulus, true, true);
  CLI::App* game = cli.add_subcommand("game", "solve the broadcast game with certificates");
  add_common(game, true, true);
  CLI::App* strength_cmd = cli.add_subcommand("strength", "graph strength and its partition");
  add_common(strength_cmd, true, true);
  CLI::App* verify = cli.add_subcommand("verify", "check a strategy pair for equilibrium");
  add_common(verify, true, false);
  verify->add_option("--strategy", cfg.strategy_path, "strategy pair as JSON")->required();
  CLI::App* homogeneity = cli.add_subcommand("homogeneity", "is the optimal usage constant?");
  add_common(homogeneity, true, false);
  CLI::App* uniform = cli.add_subcommand("uniform", "usage under a uniformly random tree");
  add_common(uniform, false, true);
  CLI::App* oracle = cli.add_subcommand("oracle", "brute-force reference answers");
  add_common(oracle, false, false);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = cli.exit(e);
    // CLI11's own codes mean nothing to callers; fold usage errors into the
    // documented "input problem" exit, keep 0 for --help.
    return code == 0 ? 0 : treemod::app::kExitParse;
  }

  if (modulus->parsed()) cfg.command = Command::Modulus;
  if (game->parsed()) cfg.command = Command::Game;
  if (strength_cmd->parsed()) cfg.command = Command::Strength;
  if (verify->parsed()) cfg.command = Command::Verify;
  if (homogeneity->parsed()) cfg.command = Command::Homogeneity;
  if (uniform->parsed()) cfg.command = Command::Uniform;
  if (oracle->parsed()) cfg.command = Command::Oracle;
  cfg.output = output == "json" ? OutputMode::Json : OutputMode::Text;

  return treemod::app::run(cfg, std::cout, std::cerr);
}
