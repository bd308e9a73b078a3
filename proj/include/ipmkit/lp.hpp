#pragma once

#include "ipmkit/core.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ipmkit {

enum class Relation { LessEqual, GreaterEqual, Equal };
enum class LpStatus { Optimal, Unbounded, Infeasible };

std::string to_string(LpStatus status);

/// maximize objective . x  subject to  A x (relation) rhs,  lower <= x <= upper.
/// Infinite bounds are allowed; the default is x >= 0.
struct LpProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd A;
  std::vector<Relation> relations;
  Eigen::VectorXd rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  LpProblem() = default;
  explicit LpProblem(Eigen::Index num_variables);

  Eigen::Index num_variables() const { return objective.size(); }
  Eigen::Index num_constraints() const { return A.rows(); }

  /// Appends one row. Reallocates A, so builders of large programs should
  /// size A up front instead.
  void add_constraint(const Eigen::RowVectorXd& row, Relation rel, double b);
  void set_free(Eigen::Index j);
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective_value = 0.0;
  /// One per constraint: d(optimum)/d(rhs).
  Eigen::VectorXd duals;
  std::size_t iterations = 0;
};

namespace lp_tolerance {
inline constexpr double feasibility = 1e-7;
inline constexpr double optimality = 1e-9;
inline constexpr double pivot = 1e-10;
}  // namespace lp_tolerance

/// Which program the simplex runs on. Auto picks whichever of the primal or
/// the dual standard form has the smaller basis.
enum class SimplexRoute { Auto, Primal, Dual };

struct SolveOptions {
  SimplexRoute route = SimplexRoute::Auto;
};

/// Two-phase revised simplex with Bland's rule. Infeasible and unbounded
/// programs are reported through the status; exceeding the iteration cap
/// of 50 * (variables + constraints) of the solved standard form throws
/// SolverError.
LpSolution solve(const LpProblem& problem, const SolveOptions& options = {});

/// Max |row . x - rhs| style violation over all constraints and bounds.
double max_violation(const LpProblem& problem, const Eigen::VectorXd& x);

/// CPLEX-style LP text, for cross-checking with external solvers.
std::string to_lp_format(const LpProblem& problem);

// ---------------------------------------------------------------------------
// Transportation problems

struct TransportSolution {
  /// flow(s, t) in the integer units of the supplies.
  std::vector<std::int64_t> flow;
  Eigen::Index num_sources = 0;
  Eigen::Index num_sinks = 0;
  double cost = 0.0;
  /// Dual potentials: u(s) - v(t) <= cost(s, t), tight on every used edge.
  Eigen::VectorXd source_potential;
  Eigen::VectorXd sink_potential;
  std::size_t augmentations = 0;

  std::int64_t at(Eigen::Index s, Eigen::Index t) const { return flow[static_cast<std::size_t>(s * num_sinks + t)]; }
};

/// Min-cost transport of integer supplies to integer demands over a dense
/// non-negative cost matrix, by successive shortest paths with Dijkstra on
/// reduced costs.
TransportSolution solve_transport(std::span<const std::int64_t> supply,
                                  std::span<const std::int64_t> demand,
                                  const Eigen::MatrixXd& cost);

// ---------------------------------------------------------------------------
// Metric-constrained programs

enum class MetricLpRoute {
  Auto,       ///< transport for the unboxed program, simplex otherwise
  Simplex,    ///< the explicit pairwise-constraint program
  Transport,  ///< unboxed program only: transport dual plus c-transform
};

struct MetricLpOptions {
  MetricLpRoute route = MetricLpRoute::Auto;
};

/// max sum w_i a_i  s.t.  |a_i - a_j| <= D_ij  for i < j.
LpProblem wasserstein_program(const Eigen::VectorXd& weights, const CostMatrix& D);

/// max sum w_i a_i  s.t.  |a_i - a_j| <= b D_ij,  |a_i| <= c,  b + c <= budget.
/// Variables are ordered (a_1..a_N, b, c).
LpProblem dudley_program(const Eigen::VectorXd& weights, const CostMatrix& D, double budget = 1.0);

/// Solves the unboxed program (no budget) or the Dudley program (budget
/// given) over a pooled sample. x holds a* (followed by b*, c* for the
/// Dudley form); objective_value is sum w_i a*_i.
LpSolution solve_metric_lp(const PooledSample& ps, const CostMatrix& D,
                           std::optional<double> budget = std::nullopt,
                           const MetricLpOptions& options = {});

/// Same, for arbitrary real weights summing to zero. The transport route
/// is unavailable here.
LpSolution solve_metric_lp(const Eigen::VectorXd& weights, const CostMatrix& D,
                           std::optional<double> budget = std::nullopt,
                           const MetricLpOptions& options = {});

}  // namespace ipmkit
