#include "ipmkit/estimators.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>

namespace ipmkit {

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Wasserstein:
      return "wasserstein";
    case MetricKind::Dudley:
      return "dudley";
    case MetricKind::MMD:
      return "mmd";
    case MetricKind::TV:
      return "tv";
  }
  return "unknown";
}

MetricKind metric_from_name(const std::string& name) {
  if (name == "wasserstein") return MetricKind::Wasserstein;
  if (name == "dudley") return MetricKind::Dudley;
  if (name == "mmd") return MetricKind::MMD;
  if (name == "tv") return MetricKind::TV;
  throw DataError("unknown metric '" + name + "' (expected wasserstein, dudley, mmd or tv)");
}

namespace {

LpSolution solve_with_context(const char* what, const PooledSample& ps, const CostMatrix& D,
                              std::optional<double> budget, const EstimatorOptions& opts) {
  LpSolution sol;
  try {
    sol = solve_metric_lp(ps, D, budget, MetricLpOptions{opts.route});
  } catch (const SolverError& e) {
    throw SolverError(std::string(what) + ": " + e.what());
  }
  if (sol.status != LpStatus::Optimal) {
    throw SolverError(std::string(what) + ": linear program reported " + to_string(sol.status));
  }
  return sol;
}

}  // namespace

EstimateReport wasserstein(const PooledSample& ps, const GroundMetric& g, const EstimatorOptions& opts) {
  const CostMatrix D = cost_matrix(ps, g);
  const LpSolution sol = solve_with_context("wasserstein", ps, D, std::nullopt, opts);
  EstimateReport r;
  r.metric = MetricKind::Wasserstein;
  r.value = std::max(0.0, sol.objective_value);
  r.n_points = ps.size();
  r.iterations = sol.iterations;
  r.witness = lipschitz_extension(ps.points, sol.x, 1.0, opts.alpha, g);
  return r;
}

EstimateReport dudley(const PooledSample& ps, const GroundMetric& g, const EstimatorOptions& opts) {
  const CostMatrix D = cost_matrix(ps, g);
  const LpSolution sol = solve_with_context("dudley", ps, D, 1.0, opts);
  const Eigen::VectorXd a = sol.x.head(ps.size());
  EstimateReport r;
  r.metric = MetricKind::Dudley;
  r.value = std::max(0.0, sol.objective_value);
  r.n_points = ps.size();
  r.iterations = sol.iterations;
  const double L = induced_lipschitz(ps.points, a, g);
  r.witness = bounded_lipschitz_extension(ps.points, a, L, a.cwiseAbs().maxCoeff(), opts.alpha, g);
  return r;
}

EstimateReport mmd(const PooledSample& ps, const Kernel& k) {
  const Eigen::Index n = ps.size();
  const Eigen::VectorXd& y = ps.weights;
  // Neumaier-compensated sum of y_i * (sum_j y_j k_ij), using symmetry.
  double sum = 0.0;
  double carry = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < i; ++j) row += y(j) * k(ps.points.row(i), ps.points.row(j));
    const double diag = k(ps.points.row(i), ps.points.row(i));
    const double term = y(i) * (2.0 * row + y(i) * diag);
    if (!std::isfinite(term)) throw DataError("kernel produced a non-finite value");
    const double t = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  const double squared = sum + carry;

  EstimateReport r;
  r.metric = MetricKind::MMD;
  r.n_points = n;
  if (squared < 0.0) {
    r.warnings.push_back("negative squared MMD " + std::to_string(squared) + " clamped to 0");
  }
  r.value = std::sqrt(std::max(0.0, squared));
  if (r.value > 0.0) r.witness = rkhs_witness(ps, k, r.value);
  return r;
}

EstimateReport tv_empirical(const PooledSample& ps, const EstimatorOptions& opts, const GroundMetric& g) {
  EstimateReport r;
  r.metric = MetricKind::TV;
  r.n_points = ps.size();
  r.warnings.push_back("empirical total variation is not a consistent estimator of the population distance");

  Eigen::VectorXd a;
  if (opts.tv_via_lp) {
    LpProblem p(ps.size());
    p.objective = ps.weights;
    p.lower.setConstant(-1.0);
    p.upper.setConstant(1.0);
    const LpSolution sol = solve(p);
    if (sol.status != LpStatus::Optimal) {
      throw SolverError("tv: linear program reported " + to_string(sol.status));
    }
    a = sol.x;
    r.value = std::max(0.0, sol.objective_value);
    r.iterations = sol.iterations;
  } else {
    a = ps.weights.unaryExpr([](double w) { return w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0); });
    // sum |p_i n - q_i m| / (m n) in integers, so disjoint samples give exactly 2.
    std::int64_t numer = 0;
    for (std::size_t i = 0; i < ps.p_count.size(); ++i) {
      numer += std::abs(static_cast<std::int64_t>(ps.p_count[i]) * ps.n - static_cast<std::int64_t>(ps.q_count[i]) * ps.m);
    }
    r.value = static_cast<double>(numer) / (static_cast<double>(ps.m) * static_cast<double>(ps.n));
  }
  const double L = induced_lipschitz(ps.points, a, g);
  r.witness = bounded_lipschitz_extension(ps.points, a, L, 1.0, opts.alpha, g);
  return r;
}

EstimateReport estimate(const PooledSample& ps, MetricKind metric, const CostSpec& cost,
                        const EstimatorOptions& opts) {
  const auto* g = std::get_if<GroundMetric>(&cost);
  const auto* k = std::get_if<Kernel>(&cost);
  switch (metric) {
    case MetricKind::Wasserstein:
      if (!g) throw DataError("wasserstein needs a ground metric, not a kernel");
      return wasserstein(ps, *g, opts);
    case MetricKind::Dudley:
      if (!g) throw DataError("dudley needs a ground metric, not a kernel");
      return dudley(ps, *g, opts);
    case MetricKind::MMD:
      if (!k) throw DataError("mmd needs a kernel, not a ground metric");
      return mmd(ps, *k);
    case MetricKind::TV:
      return tv_empirical(ps, opts, g ? *g : GroundMetric::l2());
  }
  throw DataError("unknown metric");
}

double tv_lower_bound_wb(double w, double b) {
  if (!std::isfinite(w) || !std::isfinite(b) || w < 0.0 || b < 0.0) {
    throw DataError("TV bound needs finite non-negative W and beta");
  }
  if (w == 0.0 && b == 0.0) return 0.0;
  if (b >= w) {
    throw DataError("TV bound needs beta < W (got W=" + std::to_string(w) + ", beta=" + std::to_string(b) + ")");
  }
  return w * b / (w - b);
}

double tv_lower_bound_mmd(double g, double C) {
  if (!(C > 0.0) || !std::isfinite(C)) throw DataError("kernel bound C must be positive");
  if (!(g >= 0.0) || !std::isfinite(g)) throw DataError("MMD value must be finite and non-negative");
  return g / std::sqrt(C);
}

double kl_lower_bound(double tv_lb) {
  if (!(tv_lb >= 0.0) || !std::isfinite(tv_lb)) throw DataError("TV lower bound must be non-negative");
  return tv_lb * tv_lb / 2.0;
}

}  // namespace ipmkit
