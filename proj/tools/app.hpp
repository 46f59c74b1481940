#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace treemod::app {

enum class Command { Modulus, Game, Strength, Verify, Homogeneity, Uniform, Oracle };
enum class OutputMode { Text, Json };

struct RunConfig {
  Command command = Command::Modulus;
  std::string graph_path;
  std::string strategy_path;  // verify only
  double tol = 1e-9;
  OutputMode output = OutputMode::Text;
  bool oracle_check = false;          // cross-check solver output with the oracles
  std::uint64_t cap_trees = 200;      // enumeration budget for the overlap oracle
  int cap_vertices = 10;              // partition-scan budget for the strength oracle
};

// Exit codes, also the contract for scripting against the binary: 0 success,
// 1 input problem, 2 solver/internal failure, 3 the verify check said no.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitVerifyFailed = 3;

/// Executes one command against the streams, returning the process exit
/// code. Reports go to `out`; diagnostics go to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace treemod::app
