#include "ipmkit/lp.hpp"

#include <numeric>

namespace ipmkit {

namespace {

void require_metric(const Eigen::VectorXd& weights, const CostMatrix& D) {
  if (D.source != CostSource::Metric) {
    throw DataError("metric program needs a metric-sourced cost matrix");
  }
  if (D.entries.rows() != weights.size() || D.entries.cols() != weights.size()) {
    throw DataError("cost matrix is " + std::to_string(D.entries.rows()) + "x" +
                    std::to_string(D.entries.cols()) + " but there are " + std::to_string(weights.size()) +
                    " weights");
  }
}

Eigen::Index pair_rows(Eigen::Index n) { return n * (n - 1); }

}  // namespace

LpProblem wasserstein_program(const Eigen::VectorXd& weights, const CostMatrix& D) {
  require_metric(weights, D);
  const Eigen::Index n = weights.size();
  LpProblem p(n);
  p.objective = weights;
  for (Eigen::Index j = 0; j < n; ++j) p.set_free(j);
  p.A = Eigen::MatrixXd::Zero(pair_rows(n), n);
  p.rhs.resize(pair_rows(n));
  p.relations.assign(static_cast<std::size_t>(pair_rows(n)), Relation::LessEqual);
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      p.A(row, i) = 1.0;
      p.A(row, j) = -1.0;
      p.rhs(row++) = D.entries(i, j);
      p.A(row, i) = -1.0;
      p.A(row, j) = 1.0;
      p.rhs(row++) = D.entries(i, j);
    }
  }
  return p;
}

LpProblem dudley_program(const Eigen::VectorXd& weights, const CostMatrix& D, double budget) {
  require_metric(weights, D);
  if (!(budget > 0.0) || !std::isfinite(budget)) throw DataError("Dudley budget must be positive");
  const Eigen::Index n = weights.size();
  const Eigen::Index b = n;
  const Eigen::Index c = n + 1;
  LpProblem p(n + 2);
  p.objective.head(n) = weights;
  for (Eigen::Index j = 0; j < n; ++j) p.set_free(j);
  const Eigen::Index rows = pair_rows(n) + 2 * n + 1;
  p.A = Eigen::MatrixXd::Zero(rows, n + 2);
  p.rhs = Eigen::VectorXd::Zero(rows);
  p.relations.assign(static_cast<std::size_t>(rows), Relation::LessEqual);
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      p.A(row, i) = 1.0;
      p.A(row, j) = -1.0;
      p.A(row++, b) = -D.entries(i, j);
      p.A(row, i) = -1.0;
      p.A(row, j) = 1.0;
      p.A(row++, b) = -D.entries(i, j);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    p.A(row, i) = 1.0;
    p.A(row++, c) = -1.0;
    p.A(row, i) = -1.0;
    p.A(row++, c) = -1.0;
  }
  p.A(row, b) = 1.0;
  p.A(row, c) = 1.0;
  p.rhs(row) = budget;
  return p;
}

namespace {

LpSolution solve_by_simplex(const Eigen::VectorXd& weights, const CostMatrix& D, std::optional<double> budget) {
  const LpProblem p = budget ? dudley_program(weights, D, *budget) : wasserstein_program(weights, D);
  LpSolution sol = solve(p);
  if (sol.status == LpStatus::Optimal) {
    sol.objective_value = weights.dot(sol.x.head(weights.size()));
  }
  return sol;
}

// Transport dual followed by a c-transform over the sinks, which extends the
// optimal potentials to a 1-Lipschitz function on every pooled point.
LpSolution solve_by_transport(const PooledSample& ps, const CostMatrix& D) {
  const Eigen::Index n = ps.size();
  std::vector<std::int64_t> scaled(static_cast<std::size_t>(n));
  std::int64_t g = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    scaled[k] = static_cast<std::int64_t>(ps.p_count[k]) * ps.n - static_cast<std::int64_t>(ps.q_count[k]) * ps.m;
    g = std::gcd(g, scaled[k]);
  }

  LpSolution sol;
  sol.status = LpStatus::Optimal;
  sol.x = Eigen::VectorXd::Zero(n);
  if (g == 0) return sol;

  std::vector<Eigen::Index> sources, sinks;
  std::vector<std::int64_t> supply, demand;
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::int64_t v = scaled[static_cast<std::size_t>(i)] / g;
    if (v > 0) {
      sources.push_back(i);
      supply.push_back(v);
    } else if (v < 0) {
      sinks.push_back(i);
      demand.push_back(-v);
    }
  }
  Eigen::MatrixXd cost(sources.size(), sinks.size());
  for (std::size_t s = 0; s < sources.size(); ++s) {
    for (std::size_t t = 0; t < sinks.size(); ++t) {
      cost(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = D.entries(sources[s], sinks[t]);
    }
  }
  const TransportSolution ts = solve_transport(supply, demand, cost);

  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < sinks.size(); ++t) {
      best = std::min(best, ts.sink_potential(static_cast<Eigen::Index>(t)) + D.entries(i, sinks[t]));
    }
    sol.x(i) = best;
  }
  sol.objective_value = ps.weights.dot(sol.x);
  sol.iterations = ts.augmentations;
  return sol;
}

}  // namespace

LpSolution solve_metric_lp(const PooledSample& ps, const CostMatrix& D, std::optional<double> budget,
                           const MetricLpOptions& options) {
  require_metric(ps.weights, D);
  if (budget && options.route == MetricLpRoute::Transport) {
    throw DataError("the transport route only solves the unboxed program");
  }
  if (!budget && options.route != MetricLpRoute::Simplex) return solve_by_transport(ps, D);
  return solve_by_simplex(ps.weights, D, budget);
}

LpSolution solve_metric_lp(const Eigen::VectorXd& weights, const CostMatrix& D, std::optional<double> budget,
                           const MetricLpOptions& options) {
  require_metric(weights, D);
  if (options.route == MetricLpRoute::Transport) {
    throw DataError("the transport route needs a pooled sample with integer counts");
  }
  return solve_by_simplex(weights, D, budget);
}

}  // namespace ipmkit
