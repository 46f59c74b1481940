#include "treemod/modulus.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "treemod/errors.hpp"

namespace treemod {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Gradient threshold for the projected least-squares solve. The gradient at
// a zero coordinate is 2*(1 - length of that tree), so this bound keeps all
// constraint residuals of the restricted program below 1e-10.
constexpr double kQpGradTol = 2e-10;

// A passive coordinate whose value retreats below this is treated as zero
// and returned to the active (clamped) set.
constexpr double kZeroTol = 1e-14;

// A multiplier whose share of the total mass falls below this is roundoff
// left behind by the active-set solve, not genuine support: true optimal
// masses are rationals with modest denominators, many orders of magnitude
// larger for any graph we can solve.
constexpr double kPmfNoiseTol = 1e-12;

VectorXd least_squares_on(const MatrixXd& A, const VectorXd& b, const std::vector<int>& passive) {
  MatrixXd sub(A.rows(), static_cast<Eigen::Index>(passive.size()));
  for (size_t i = 0; i < passive.size(); ++i) {
    sub.col(static_cast<Eigen::Index>(i)) = A.col(passive[i]);
  }
  // Complete orthogonal decomposition returns the minimum-norm solution even
  // when the passive columns are rank deficient — which is routine here,
  // because the optimal tree pmf is usually not unique.
  return sub.completeOrthogonalDecomposition().solve(b);
}

struct NnlsResult {
  VectorXd x;
  int iterations = 0;
  bool converged = false;
};

// Lawson-Hanson active-set method for min ||A x - b|| subject to x >= 0.
// warm_start, when given, seeds the passive set with its positive support.
NnlsResult nnls(const MatrixXd& A, const VectorXd& b, int max_iterations,
                const std::vector<double>* warm_start) {
  const int m = static_cast<int>(A.cols());
  NnlsResult out;
  out.x = VectorXd::Zero(m);

  std::vector<char> in_passive(static_cast<size_t>(m), 0);
  std::vector<int> passive;
  if (warm_start) {
    for (int j = 0; j < m; ++j) {
      if ((*warm_start)[static_cast<size_t>(j)] > 0.0) {
        in_passive[static_cast<size_t>(j)] = 1;
        passive.push_back(j);
        out.x[j] = (*warm_start)[static_cast<size_t>(j)];
      }
    }
  }

  // Re-solve on the passive set; while the unconstrained solution pokes
  // below zero, step from the current feasible x toward it only as far as
  // feasibility allows and drop the coordinates that hit the boundary.
  // Each pass removes at least one coordinate, so this terminates.
  auto restore_feasibility = [&]() {
    while (!passive.empty()) {
      VectorXd z = least_squares_on(A, b, passive);
      double alpha = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < passive.size(); ++i) {
        if (z[static_cast<Eigen::Index>(i)] <= 0.0) {
          double xi = out.x[passive[i]];
          alpha = std::min(alpha, xi / (xi - z[static_cast<Eigen::Index>(i)]));
        }
      }
      if (!std::isfinite(alpha)) {
        // Interior solution: adopt it outright.
        for (size_t i = 0; i < passive.size(); ++i) {
          out.x[passive[i]] = z[static_cast<Eigen::Index>(i)];
        }
        return;
      }
      std::vector<int> keep;
      keep.reserve(passive.size());
      for (size_t i = 0; i < passive.size(); ++i) {
        int j = passive[i];
        double stepped = out.x[j] + alpha * (z[static_cast<Eigen::Index>(i)] - out.x[j]);
        if (stepped > kZeroTol) {
          out.x[j] = stepped;
          keep.push_back(j);
        } else {
          out.x[j] = 0.0;
          in_passive[static_cast<size_t>(j)] = 0;
        }
      }
      if (keep.size() == passive.size()) {
        // alpha failed to zero anything (can only be roundoff); bail out by
        // dropping the most negative coordinate to guarantee progress.
        size_t worst = 0;
        for (size_t i = 1; i < passive.size(); ++i) {
          if (z[static_cast<Eigen::Index>(i)] < z[static_cast<Eigen::Index>(worst)]) worst = i;
        }
        int j = passive[worst];
        out.x[j] = 0.0;
        in_passive[static_cast<size_t>(j)] = 0;
        keep.erase(std::remove(keep.begin(), keep.end(), j), keep.end());
      }
      passive = std::move(keep);
    }
    // Passive set emptied: x is identically zero.
  };

  if (!passive.empty()) restore_feasibility();

  while (out.iterations < max_iterations) {
    ++out.iterations;
    VectorXd w = A.transpose() * (b - A * out.x);
    int enter = -1;
    double best = kQpGradTol;
    for (int j = 0; j < m; ++j) {
      if (!in_passive[static_cast<size_t>(j)] && w[j] > best) {
        best = w[j];
        enter = j;
      }
    }
    if (enter < 0) {
      out.converged = true;
      return out;
    }
    in_passive[static_cast<size_t>(enter)] = 1;
    passive.push_back(enter);
    restore_feasibility();
  }
  return out;  // converged stays false
}

}  // namespace

void validate_tree_pmf(const TreePmf& mu, const Graph& g, double tol) {
  double total = 0.0;
  for (const auto& [tree, p] : mu.entries) {
    if (!(p >= 0.0)) throw std::invalid_argument("tree pmf has a negative probability");
    if (!is_spanning_tree(g, tree)) {
      throw std::invalid_argument("tree pmf key is not a spanning tree of the graph");
    }
    total += p;
  }
  if (std::fabs(total - 1.0) > tol) {
    throw std::invalid_argument("tree pmf mass is " + std::to_string(total) + ", expected 1");
  }
}

UsageVector expected_usage(const TreePmf& mu, int edge_count) {
  UsageVector out;
  out.values.assign(static_cast<size_t>(edge_count), 0.0);
  for (const auto& [tree, p] : mu.entries) {
    for (int id : tree.edge_ids()) {
      if (id >= edge_count) throw std::invalid_argument("tree pmf references an unknown edge id");
      out.values[static_cast<size_t>(id)] += p;
    }
  }
  return out;
}

double expected_overlap(const TreePmf& mu) {
  std::map<int, double> usage;
  for (const auto& [tree, p] : mu.entries) {
    for (int id : tree.edge_ids()) usage[id] += p;
  }
  double total = 0.0;
  for (const auto& [id, u] : usage) total += u * u;
  return total;
}

RestrictedQpResult solve_qp_restricted(const Graph& g, const std::vector<SpanningTree>& rows,
                                       const std::vector<double>* warm_lambda) {
  const int n = g.vertex_count();
  const int edge_count = g.edge_count();
  if (rows.empty()) throw std::invalid_argument("restricted program needs at least one row");
  if (n < 2) throw std::invalid_argument("a single-vertex graph admits no admissible density");
  if (warm_lambda && warm_lambda->size() != rows.size()) {
    throw std::invalid_argument("warm start length does not match the row count");
  }
  for (const SpanningTree& t : rows) {
    if (!is_spanning_tree(g, t)) {
      throw std::invalid_argument("restricted program row is not a spanning tree");
    }
  }

  const int m = static_cast<int>(rows.size());
  MatrixXd A = MatrixXd::Zero(edge_count, m);
  for (int j = 0; j < m; ++j) {
    for (int id : rows[static_cast<size_t>(j)].edge_ids()) {
      A(id, j) = 1.0;
    }
  }

  // Wolfe dual of (min sum rho^2 s.t. A^T rho >= 1, rho >= 0) in disguise:
  // because every column of A carries exactly n-1 ones, maximizing the dual
  // is the same as solving min ||A lam - b|| over lam >= 0 with b constant
  // 2/(n-1), and the primal optimum is recovered as rho = (A lam)/2. That
  // turns the inner solve into textbook nonnegative least squares.
  VectorXd b = VectorXd::Constant(edge_count, 2.0 / static_cast<double>(n - 1));
  NnlsResult sol = nnls(A, b, 50 * m + 200, warm_lambda);
  if (!sol.converged) {
    throw SolverError("restricted program: nonnegative least squares hit its iteration cap");
  }

  VectorXd rho = 0.5 * (A * sol.x);
  VectorXd lengths = A.transpose() * rho;
  for (int j = 0; j < m; ++j) {
    if (lengths[j] < 1.0 - 1e-9) {
      throw SolverError("restricted program: a row constraint is violated at the claimed optimum");
    }
    if (sol.x[j] > 0.0 && std::fabs(lengths[j] - 1.0) > 1e-8) {
      throw SolverError("restricted program: complementary slackness failed on a support row");
    }
  }

  RestrictedQpResult out;
  out.rho.values.assign(rho.data(), rho.data() + edge_count);
  out.lambda.assign(sol.x.data(), sol.x.data() + m);
  out.energy = rho.squaredNorm();
  out.iterations = sol.iterations;
  return out;
}

TreePmf extract_pmf(const std::vector<double>& lambda, const std::vector<SpanningTree>& rows) {
  if (lambda.size() != rows.size()) {
    throw std::invalid_argument("multiplier count does not match the row count");
  }
  double total = 0.0;
  for (double v : lambda) {
    if (!(v >= 0.0)) throw std::invalid_argument("multipliers must be nonnegative");
    total += v;
  }
  if (total <= 0.0) throw std::invalid_argument("cannot normalize all-zero multipliers");
  // Renormalize over the entries that carry genuine mass so noise never
  // shows up as support. The largest share is at least 1/rows.size(), so
  // something always survives the cut.
  const double cutoff = kPmfNoiseTol * total;
  double kept = 0.0;
  for (double v : lambda) {
    if (v > cutoff) kept += v;
  }
  TreePmf out;
  for (size_t j = 0; j < rows.size(); ++j) {
    if (lambda[j] > cutoff) out.entries[rows[j]] += lambda[j] / kept;
  }
  return out;
}

ModulusResult compute_modulus(const Graph& g, double tol, int max_outer_iterations) {
  const int n = g.vertex_count();
  const int edge_count = g.edge_count();
  if (n < 2 || edge_count < 1) {
    throw std::invalid_argument("modulus needs at least two vertices and one edge");
  }
  if (!(tol > 0.0) || tol > 1e-4) {
    throw std::invalid_argument("tolerance must lie in (0, 1e-4]");
  }
  const int cap = max_outer_iterations > 0 ? max_outer_iterations : 50 * edge_count;

  std::vector<SpanningTree> active;
  active.push_back(
      min_spanning_tree(g, Density{std::vector<double>(static_cast<size_t>(edge_count), 1.0)})
          .tree);

  RestrictedQpResult qp;
  std::vector<double> warm;
  double prev_energy = 0.0;
  bool certified = false;
  int outer = 0;

  while (outer < cap) {
    ++outer;
    qp = solve_qp_restricted(g, active, warm.empty() ? nullptr : &warm);
    warm = qp.lambda;

    // Each added row shrinks the feasible set, so the optimum may only climb.
    if (qp.energy < prev_energy - 1e-9 * std::max(1.0, prev_energy)) {
      throw SolverError("restricted optimum decreased after adding a constraint");
    }
    prev_energy = qp.energy;

    MstResult shortest = min_spanning_tree(g, qp.rho);
    // Support rows sit at length exactly 1, so nothing can be longer than
    // that at the minimum; a breach means the inner solve lied.
    if (shortest.length > 1.0 + 1e-9) {
      throw SolverError("shortest tree is longer than the active rows allow");
    }
    if (shortest.length >= 1.0 - tol) {
      certified = true;
      break;
    }
    // Restricted optima sandwich the true value: qp.energy from below, the
    // rescaled admissible density from above. New rows must keep entering.
    for (const SpanningTree& t : active) {
      if (t == shortest.tree) {
        throw SolverError("constraint generation stalled on a repeated tree");
      }
    }
    active.push_back(shortest.tree);
    warm.push_back(0.0);
  }

  if (!certified) {
    throw SolverError("constraint generation hit the cap of " + std::to_string(cap) +
                      " iterations without certifying admissibility");
  }

  ModulusResult out;
  out.mod2 = qp.energy;
  out.rho_star = qp.rho;
  out.active_trees = active;
  out.iterations = outer;
  out.tolerance_used = tol;

  // The multipliers double as the optimal pmf: their total must be twice the
  // modulus, and normalizing them gives a minimizer of the expected overlap.
  double lambda_sum = std::accumulate(qp.lambda.begin(), qp.lambda.end(), 0.0);
  if (std::fabs(lambda_sum - 2.0 * out.mod2) > 1e-8) {
    throw SolverError("dual normalization identity failed");
  }
  out.mu_star = extract_pmf(qp.lambda, active);
  out.eta_star = expected_usage(out.mu_star, edge_count);

  double usage_sum = 0.0;
  for (size_t e = 0; e < out.eta_star.values.size(); ++e) {
    usage_sum += out.eta_star.values[e];
    double scaled = out.rho_star.values[e] / out.mod2;
    if (std::fabs(out.eta_star.values[e] - scaled) > 1e-8) {
      throw SolverError("optimal usage does not match the rescaled density");
    }
  }
  if (std::fabs(usage_sum - static_cast<double>(n - 1)) > 1e-9) {
    throw SolverError("optimal usage does not sum to vertex_count - 1");
  }
  double overlap = expected_overlap(out.mu_star);
  if (std::fabs(overlap * out.mod2 - 1.0) > 1e-6) {
    throw SolverError("expected overlap does not invert the modulus");
  }
  return out;
}

RationalUsage exact_round(const UsageVector& eta, int edge_count) {
  if (edge_count < 1) throw std::invalid_argument("edge count must be positive");
  if (eta.values.size() != static_cast<size_t>(edge_count)) {
    throw std::invalid_argument("usage length does not match the edge count");
  }
  // Optimal usage entries are rationals with denominator at most the edge
  // count, and two distinct such rationals differ by at least
  // 1/edge_count^2. A half-window search is therefore unambiguous.
  const double window = 1.0 / (2.0 * static_cast<double>(edge_count) * edge_count);

  double float_sum = 0.0;
  for (double x : eta.values) float_sum += x;
  const long long target = std::llround(float_sum);

  RationalUsage out;
  out.values.reserve(eta.values.size());
  Rational total(0);
  for (size_t e = 0; e < eta.values.size(); ++e) {
    auto r = Rational::approximate(eta.values[e], edge_count, window);
    if (!r) {
      throw SolverError("usage entry " + std::to_string(eta.values[e]) + " at edge " +
                        std::to_string(e) + " has no rational with denominator <= " +
                        std::to_string(edge_count) + " within the rounding window");
    }
    if (*r < Rational(0) || *r > Rational(1)) {
      throw SolverError("rounded usage at edge " + std::to_string(e) + " is outside [0,1]");
    }
    total += *r;
    out.values.push_back(*r);
  }
  if (total != Rational(target)) {
    throw SolverError("rounded usage sums to " + total.str() + ", expected " +
                      std::to_string(target));
  }
  return out;
}

}  // namespace treemod
