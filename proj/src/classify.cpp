#include "ipmkit/classify.hpp"

#include "ipmkit/lp.hpp"

#include <map>

namespace ipmkit {

LabeledSample::LabeledSample(PointMatrix points, std::vector<int> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (points_.rows() == 0) throw DataError("labeled sample is empty");
  if (static_cast<Eigen::Index>(labels_.size()) != points_.rows()) {
    throw DataError("labeled sample has " + std::to_string(points_.rows()) + " points but " +
                    std::to_string(labels_.size()) + " labels");
  }
  require_finite(points_, "labeled sample");
  for (int y : labels_) {
    if (y != 1 && y != -1) throw DataError("labels must be +1 or -1, got " + std::to_string(y));
    if (y == 1) ++positives_;
  }
}

void LabeledSample::require_both_classes() const {
  if (positives_ == 0 || negatives() == 0) {
    throw DataError("training data needs at least one point of each label");
  }
}

PooledSample LabeledSample::as_pooled() const {
  require_both_classes();
  PointMatrix pos(positives(), dim());
  PointMatrix neg(negatives(), dim());
  Eigen::Index ip = 0;
  Eigen::Index in = 0;
  for (Eigen::Index i = 0; i < size(); ++i) {
    if (labels_[static_cast<std::size_t>(i)] == 1) {
      pos.row(ip++) = points_.row(i);
    } else {
      neg.row(in++) = points_.row(i);
    }
  }
  return pool(SampleSet(std::move(pos), Label::P), SampleSet(std::move(neg), Label::Q));
}

std::string to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::Parzen:
      return "parzen";
    case ClassifierKind::LipschitzMargin:
      return "lipschitz";
    case ClassifierKind::BoundedLipschitzMargin:
      return "bounded-lipschitz";
  }
  return "unknown";
}

int Classifier::predict(PointRef x) const { return discriminant.evaluate(x) > 0.0 ? 1 : -1; }

std::vector<int> Classifier::predict_batch(const PointMatrix& xs) const {
  std::vector<int> out(static_cast<std::size_t>(xs.rows()));
  for (Eigen::Index i = 0; i < xs.rows(); ++i) out[static_cast<std::size_t>(i)] = predict(xs.row(i));
  return out;
}

double l_risk_check(const PooledSample& ps, const EstimateReport& est) {
  if (!est.witness) throw DataError("estimate has no witness (zero MMD estimate)");
  const double eps = static_cast<double>(ps.m) / static_cast<double>(ps.m + ps.n);
  const Eigen::VectorXd f = est.witness->evaluate_batch(ps.points);
  double positive_part = 0.0;
  double negative_part = 0.0;
  for (Eigen::Index i = 0; i < ps.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    positive_part += ps.p_count[k] * (-f(i) / eps);
    negative_part += ps.q_count[k] * (f(i) / (1.0 - eps));
  }
  return eps * positive_part / ps.m + (1.0 - eps) * negative_part / ps.n;
}

Classifier parzen_train(const LabeledSample& ls, const Kernel& k) {
  ls.require_both_classes();
  Eigen::VectorXd w(ls.size());
  const double up = 1.0 / static_cast<double>(ls.positives());
  const double down = -1.0 / static_cast<double>(ls.negatives());
  for (Eigen::Index i = 0; i < ls.size(); ++i) w(i) = ls.labels()[static_cast<std::size_t>(i)] == 1 ? up : down;
  return Classifier{ClassifierKind::Parzen, rkhs_expansion(ls.points(), std::move(w), k), 0.0};
}

MeanDistances mean_distance_interpretation(const LabeledSample& ls, const Kernel& k, PointRef x) {
  ls.require_both_classes();
  if (x.size() != ls.dim()) throw DataError("test point dimension does not match the training data");
  double cross_pos = 0.0, cross_neg = 0.0;
  double gram_pos = 0.0, gram_neg = 0.0;
  const auto& y = ls.labels();
  for (Eigen::Index i = 0; i < ls.size(); ++i) {
    const bool pi = y[static_cast<std::size_t>(i)] == 1;
    (pi ? cross_pos : cross_neg) += k(x, ls.points().row(i));
    for (Eigen::Index j = 0; j < ls.size(); ++j) {
      if (pi != (y[static_cast<std::size_t>(j)] == 1)) continue;
      (pi ? gram_pos : gram_neg) += k(ls.points().row(i), ls.points().row(j));
    }
  }
  const double m = static_cast<double>(ls.positives());
  const double n = static_cast<double>(ls.negatives());
  const double kxx = k(x, x);
  return {kxx - 2.0 * cross_pos / m + gram_pos / (m * m), kxx - 2.0 * cross_neg / n + gram_neg / (n * n)};
}

Classifier lipschitz_margin_train(const LabeledSample& ls, const GroundMetric& g, bool bounded) {
  ls.require_both_classes();

  std::map<std::pair<std::vector<double>, int>, Eigen::Index> seen;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ls.size(); ++i) {
    std::vector<double> key(ls.points().row(i).data(), ls.points().row(i).data() + ls.dim());
    if (seen.emplace(std::make_pair(std::move(key), ls.labels()[static_cast<std::size_t>(i)]), i).second) {
      keep.push_back(i);
    }
  }
  const auto n = static_cast<Eigen::Index>(keep.size());
  PointMatrix pts(n, ls.dim());
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    pts.row(i) = ls.points().row(keep[static_cast<std::size_t>(i)]);
    y[static_cast<std::size_t>(i)] = ls.labels()[static_cast<std::size_t>(keep[static_cast<std::size_t>(i)])];
  }
  const CostMatrix D = cost_matrix(pts, g);

  // Variables (a_1..a_n, L[, c]).
  const Eigen::Index L = n;
  const Eigen::Index c = n + 1;
  const Eigen::Index vars = bounded ? n + 2 : n + 1;
  const Eigen::Index rows = n * (n - 1) + n + (bounded ? 2 * n : 0);
  LpProblem p(vars);
  for (Eigen::Index i = 0; i < n; ++i) p.set_free(i);
  p.objective(L) = -1.0;
  if (bounded) p.objective(c) = -1.0;
  p.A = Eigen::MatrixXd::Zero(rows, vars);
  p.rhs = Eigen::VectorXd::Zero(rows);
  p.relations.assign(static_cast<std::size_t>(rows), Relation::LessEqual);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      p.A(r, i) = 1.0;
      p.A(r, j) = -1.0;
      p.A(r++, L) = -D.entries(i, j);
      p.A(r, i) = -1.0;
      p.A(r, j) = 1.0;
      p.A(r++, L) = -D.entries(i, j);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    p.A(r, i) = y[static_cast<std::size_t>(i)];
    p.relations[static_cast<std::size_t>(r)] = Relation::GreaterEqual;
    p.rhs(r++) = 1.0;
  }
  if (bounded) {
    for (Eigen::Index i = 0; i < n; ++i) {
      p.A(r, i) = 1.0;
      p.A(r++, c) = -1.0;
      p.A(r, i) = -1.0;
      p.A(r++, c) = -1.0;
    }
  }

  const LpSolution sol = solve(p);
  if (sol.status == LpStatus::Infeasible) {
    throw InfeasibleError("training set is not separable: a point carries both labels");
  }
  if (sol.status != LpStatus::Optimal) {
    throw SolverError("margin classifier: linear program reported " + to_string(sol.status));
  }
  const Eigen::VectorXd a = sol.x.head(n);
  const double lip = std::max(sol.x(L), induced_lipschitz(pts, a, g));
  if (!bounded) {
    return Classifier{ClassifierKind::LipschitzMargin, lipschitz_extension(pts, a, lip, 0.5, g), 1.0 / lip};
  }
  const double cap = std::max(sol.x(c), a.cwiseAbs().maxCoeff());
  return Classifier{ClassifierKind::BoundedLipschitzMargin,
                    bounded_lipschitz_extension(pts, a, lip, cap, 0.5, g), 1.0 / (lip + cap)};
}

MarginBound margin_bound_check(const LabeledSample& ls, const Classifier& c, const GroundMetric& g) {
  const PooledSample ps = ls.as_pooled();
  double bound = 0.0;
  switch (c.kind) {
    case ClassifierKind::LipschitzMargin:
      bound = wasserstein(ps, g).value / 2.0;
      break;
    case ClassifierKind::BoundedLipschitzMargin:
      bound = dudley(ps, g).value / 2.0;
      break;
    case ClassifierKind::Parzen:
      throw DataError("margin bounds apply to the Lipschitz classifiers only");
  }
  // The bound is attained on some inputs, so compare with a relative slack
  // at round-off level.
  const bool holds = c.margin <= bound * (1.0 + 1e-9) + 1e-12;
  return {c.margin, bound, holds};
}

MarginBound margin_bound_check(const LabeledSample& ls, const GroundMetric& g, bool bounded) {
  return margin_bound_check(ls, lipschitz_margin_train(ls, g, bounded), g);
}

}  // namespace ipmkit
