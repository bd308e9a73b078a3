#include "ipmkit/oracles.hpp"

#include "ipmkit/lp.hpp"
#include "ipmkit/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace ipmkit {

namespace {

void require_dim(const Eigen::VectorXd& v, Eigen::Index d, const char* what) {
  if (v.size() != d) throw DataError(std::string(what) + " must have one entry per dimension");
  if (!v.allFinite()) throw DataError(std::string(what) + " must be finite");
}

void require_positive(const Eigen::VectorXd& v, const char* what) {
  if ((v.array() <= 0.0).any()) throw DataError(std::string(what) + " must be positive");
}

}  // namespace

std::string to_string(ProductDistribution::Kind kind) {
  switch (kind) {
    case ProductDistribution::Kind::Uniform:
      return "uniform";
    case ProductDistribution::Kind::TruncExp:
      return "truncexp";
    case ProductDistribution::Kind::Gaussian:
      return "gaussian";
    case ProductDistribution::Kind::Exp:
      return "exp";
    case ProductDistribution::Kind::Discrete:
      return "discrete";
  }
  return "unknown";
}

ProductDistribution ProductDistribution::uniform(Eigen::VectorXd a, Eigen::VectorXd b) {
  if (a.size() == 0) throw DataError("uniform: dimension must be >= 1");
  require_dim(a, a.size(), "uniform a");
  require_dim(b, a.size(), "uniform b");
  if ((b.array() <= a.array()).any()) throw DataError("uniform: need b_i > a_i");
  ProductDistribution d;
  d.kind_ = Kind::Uniform;
  d.dim_ = a.size();
  d.first_ = std::move(a);
  d.second_ = std::move(b);
  return d;
}

ProductDistribution ProductDistribution::trunc_exp(Eigen::VectorXd lambda, Eigen::VectorXd c) {
  if (lambda.size() == 0) throw DataError("truncexp: dimension must be >= 1");
  require_dim(lambda, lambda.size(), "truncexp lambda");
  require_dim(c, lambda.size(), "truncexp c");
  require_positive(lambda, "truncexp lambda");
  require_positive(c, "truncexp c");
  ProductDistribution d;
  d.kind_ = Kind::TruncExp;
  d.dim_ = lambda.size();
  d.first_ = std::move(lambda);
  d.second_ = std::move(c);
  return d;
}

ProductDistribution ProductDistribution::gaussian(Eigen::VectorXd mean, Eigen::VectorXd sigma) {
  if (mean.size() == 0) throw DataError("gaussian: dimension must be >= 1");
  require_dim(mean, mean.size(), "gaussian mean");
  require_dim(sigma, mean.size(), "gaussian sigma");
  require_positive(sigma, "gaussian sigma");
  ProductDistribution d;
  d.kind_ = Kind::Gaussian;
  d.dim_ = mean.size();
  d.first_ = std::move(mean);
  d.second_ = std::move(sigma);
  return d;
}

ProductDistribution ProductDistribution::exponential(Eigen::VectorXd lambda) {
  if (lambda.size() == 0) throw DataError("exp: dimension must be >= 1");
  require_dim(lambda, lambda.size(), "exp lambda");
  require_positive(lambda, "exp lambda");
  ProductDistribution d;
  d.kind_ = Kind::Exp;
  d.dim_ = lambda.size();
  d.first_ = std::move(lambda);
  return d;
}

ProductDistribution ProductDistribution::discrete(PointMatrix support, Eigen::VectorXd probs) {
  if (support.rows() == 0 || support.cols() == 0) throw DataError("discrete: empty support");
  require_finite(support, "discrete support");
  if (probs.size() != support.rows()) throw DataError("discrete: one probability per support point");
  if (!probs.allFinite() || (probs.array() < 0.0).any()) throw DataError("discrete: probabilities must be >= 0");
  if (std::abs(probs.sum() - 1.0) > 1e-12) {
    throw DataError("discrete: probabilities sum to " + std::to_string(probs.sum()) + ", not 1");
  }
  ProductDistribution d;
  d.kind_ = Kind::Discrete;
  d.dim_ = support.cols();
  d.support_ = std::move(support);
  d.probs_ = std::move(probs);
  return d;
}

ProductDistribution ProductDistribution::resized(Eigen::Index d) const {
  if (d < 1) throw DataError("dimension must be >= 1");
  if (kind_ == Kind::Discrete) throw DataError("a discrete law cannot be resized");
  auto spread = [&](const Eigen::VectorXd& v) {
    if (v.size() > 0 && (v.array() != v(0)).any()) {
      throw DataError(to_string(kind_) + ": resizing needs identical parameters in every dimension");
    }
    return v.size() > 0 ? Eigen::VectorXd::Constant(d, v(0)) : Eigen::VectorXd();
  };
  ProductDistribution out = *this;
  out.dim_ = d;
  out.first_ = spread(first_);
  out.second_ = spread(second_);
  return out;
}

SampleSet sample(const ProductDistribution& dist, Eigen::Index n, std::uint64_t seed, Label label) {
  if (n < 1) throw DataError("sample size must be >= 1");
  const Eigen::Index d = dist.dim();
  PointMatrix pts(n, d);
  using Kind = ProductDistribution::Kind;

  if (dist.kind() == Kind::Discrete) {
    const CounterRng rng(derive_key(seed, {0}));
    const Eigen::Index k = dist.probs().size();
    std::vector<double> cumulative(static_cast<std::size_t>(k));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) cumulative[static_cast<std::size_t>(i)] = acc += dist.probs()(i);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double u = rng.uniform(static_cast<std::uint64_t>(i)) * acc;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      const auto idx = std::min<Eigen::Index>(it - cumulative.begin(), k - 1);
      pts.row(i) = dist.support().row(idx);
    }
    return SampleSet(std::move(pts), label);
  }

  for (Eigen::Index j = 0; j < d; ++j) {
    const CounterRng rng(derive_key(seed, {static_cast<std::uint64_t>(j) + 1}));
    const double p1 = dist.first()(j);
    const double p2 = dist.second().size() ? dist.second()(j) : 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto c = static_cast<std::uint64_t>(i);
      double x = 0.0;
      switch (dist.kind()) {
        case Kind::Uniform:
          x = p1 + (p2 - p1) * rng.uniform(c);
          break;
        case Kind::TruncExp:
          x = -std::log1p(-rng.uniform(c) * -std::expm1(-p1 * p2)) / p1;
          break;
        case Kind::Exp:
          x = -std::log1p(-rng.uniform(c)) / p1;
          break;
        case Kind::Gaussian: {
          const double u1 = rng.uniform(2 * c);
          const double u2 = rng.uniform(2 * c + 1);
          x = p1 + p2 * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
          break;
        }
        case Kind::Discrete:
          break;
      }
      pts(i, j) = x;
    }
  }
  return SampleSet(std::move(pts), label);
}

namespace {

void require_same_dim(const ProductDistribution& p, const ProductDistribution& q) {
  if (p.dim() != q.dim()) {
    throw DataError("distributions differ in dimension (" + std::to_string(p.dim()) + " vs " +
                    std::to_string(q.dim()) + ")");
  }
}

struct MergedDiscrete {
  PointMatrix points;
  Eigen::VectorXd theta;
};

// Concatenates the supports with weights (p, -q), merging coincident points.
MergedDiscrete merge_discrete(const ProductDistribution& p, const ProductDistribution& q) {
  using Kind = ProductDistribution::Kind;
  if (p.kind() != Kind::Discrete || q.kind() != Kind::Discrete) {
    throw DataError("both distributions must be discrete");
  }
  require_same_dim(p, q);
  std::map<std::vector<double>, std::size_t> index;
  std::vector<std::vector<double>> pts;
  std::vector<double> theta;
  auto add = [&](const ProductDistribution& dist, double sign) {
    for (Eigen::Index i = 0; i < dist.support().rows(); ++i) {
      std::vector<double> key(dist.support().row(i).data(), dist.support().row(i).data() + dist.dim());
      auto [it, inserted] = index.emplace(key, pts.size());
      if (inserted) {
        pts.push_back(std::move(key));
        theta.push_back(0.0);
      }
      theta[it->second] += sign * dist.probs()(i);
    }
  };
  add(p, 1.0);
  add(q, -1.0);
  MergedDiscrete out;
  out.points.resize(static_cast<Eigen::Index>(pts.size()), p.dim());
  out.theta.resize(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out.points.row(r) = Eigen::Map<const Eigen::RowVectorXd>(pts[i].data(), p.dim());
    out.theta(r) = theta[i];
  }
  return out;
}

double solve_discrete(const MergedDiscrete& md, const GroundMetric& g, std::optional<double> budget) {
  const CostMatrix D = cost_matrix(md.points, g);
  const LpSolution sol = solve_metric_lp(md.theta, D, budget);
  if (sol.status != LpStatus::Optimal) {
    throw SolverError("population program reported " + to_string(sol.status));
  }
  return std::max(0.0, sol.objective_value);
}

double uniform_1d(double a, double b, double r, double s) {
  if (a <= r && r <= b && b <= s) return (s + r - a - b) / 2.0;
  if (r <= a && a <= s && s <= b) return (a + b - r - s) / 2.0;
  throw DataError("uniform pair is not interleaved as a <= r <= b <= s (or the mirrored order)");
}

double trunc_exp_1d(double lambda, double mu, double c) {
  const double el = std::exp(-lambda * c);
  const double em = std::exp(-mu * c);
  return std::abs(1.0 / lambda - 1.0 / mu - c * (el - em) / ((1.0 - el) * (1.0 - em)));
}

}  // namespace

double wasserstein_population(const ProductDistribution& p, const ProductDistribution& q, const GroundMetric& g) {
  using Kind = ProductDistribution::Kind;
  if (p.kind() == Kind::Discrete && q.kind() == Kind::Discrete) {
    return solve_discrete(merge_discrete(p, q), g, std::nullopt);
  }
  require_same_dim(p, q);
  if (g.kind() != GroundMetric::Kind::L1) {
    throw DataError("closed-form Wasserstein values assume the l1 ground metric");
  }
  double total = 0.0;
  if (p.kind() == Kind::Uniform && q.kind() == Kind::Uniform) {
    for (Eigen::Index i = 0; i < p.dim(); ++i) {
      total += uniform_1d(p.first()(i), p.second()(i), q.first()(i), q.second()(i));
    }
    return total;
  }
  if (p.kind() == Kind::TruncExp && q.kind() == Kind::TruncExp) {
    for (Eigen::Index i = 0; i < p.dim(); ++i) {
      if (p.second()(i) != q.second()(i)) {
        throw DataError("truncated exponentials must share the truncation point per dimension");
      }
      total += trunc_exp_1d(p.first()(i), q.first()(i), p.second()(i));
    }
    return total;
  }
  throw DataError("no closed-form Wasserstein value for " + to_string(p.kind()) + " vs " + to_string(q.kind()));
}

double wasserstein_1d_cdf(const SampleSet& s1, const SampleSet& s2) {
  if (s1.dim() != 1 || s2.dim() != 1) throw DataError("CDF-area distance needs one-dimensional samples");
  std::vector<double> a(s1.points().data(), s1.points().data() + s1.size());
  std::vector<double> b(s2.points().data(), s2.points().data() + s2.size());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double m = static_cast<double>(a.size());
  const double n = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double area = 0.0;
  double x = std::min(a.front(), b.front());
  while (i < a.size() || j < b.size()) {
    const double next = j == b.size() || (i < a.size() && a[i] <= b[j]) ? a[i] : b[j];
    area += std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n) * (next - x);
    x = next;
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
  }
  return area;
}

double mmd_population(const ProductDistribution& p, const ProductDistribution& q, const Kernel& k) {
  using Kind = ProductDistribution::Kind;
  if (p.kind() == Kind::Discrete && q.kind() == Kind::Discrete) {
    const MergedDiscrete md = merge_discrete(p, q);
    const CostMatrix K = cost_matrix(md.points, k);
    return std::sqrt(std::max(0.0, md.theta.dot(K.entries * md.theta)));
  }
  require_same_dim(p, q);
  double pp = 1.0, qq = 1.0, pq = 1.0;
  if (p.kind() == Kind::Gaussian && q.kind() == Kind::Gaussian && k.kind() == Kernel::Kind::Gaussian) {
    const double tau2 = k.param() * k.param();
    for (Eigen::Index i = 0; i < p.dim(); ++i) {
      const double s2 = p.second()(i) * p.second()(i);
      const double t2 = q.second()(i) * q.second()(i);
      const double dm = p.first()(i) - q.first()(i);
      pp *= k.param() / std::sqrt(2.0 * s2 + tau2);
      qq *= k.param() / std::sqrt(2.0 * t2 + tau2);
      pq *= k.param() * std::exp(-dm * dm / (2.0 * (s2 + t2 + tau2))) / std::sqrt(s2 + t2 + tau2);
    }
  } else if (p.kind() == Kind::Exp && q.kind() == Kind::Exp && k.kind() == Kernel::Kind::Laplacian) {
    const double alpha = k.param();
    for (Eigen::Index i = 0; i < p.dim(); ++i) {
      const double l = p.first()(i);
      const double m = q.first()(i);
      pp *= l / (l + alpha);
      qq *= m / (m + alpha);
      pq *= l * m * (l + m + 2.0 * alpha) / ((l + alpha) * (m + alpha) * (l + m));
    }
  } else {
    throw DataError("no closed-form MMD value for " + to_string(p.kind()) + " vs " + to_string(q.kind()) +
                    " under the " + k.name() + " kernel");
  }
  return std::sqrt(std::max(0.0, pp + qq - 2.0 * pq));
}

double dudley_population_discrete(const ProductDistribution& p, const ProductDistribution& q,
                                  const GroundMetric& g) {
  return solve_discrete(merge_discrete(p, q), g, 1.0);
}

double tv_population_discrete(const ProductDistribution& p, const ProductDistribution& q) {
  return merge_discrete(p, q).theta.cwiseAbs().sum();
}

std::optional<double> population_value(const ProductDistribution& p, const ProductDistribution& q,
                                       MetricKind metric, const CostSpec& cost) {
  using Kind = ProductDistribution::Kind;
  const bool discrete = p.kind() == Kind::Discrete && q.kind() == Kind::Discrete;
  const auto* g = std::get_if<GroundMetric>(&cost);
  const auto* k = std::get_if<Kernel>(&cost);
  try {
    switch (metric) {
      case MetricKind::Wasserstein:
        if (!g) return std::nullopt;
        if (!discrete && (g->kind() != GroundMetric::Kind::L1 || p.kind() != q.kind() ||
                          (p.kind() != Kind::Uniform && p.kind() != Kind::TruncExp))) {
          return std::nullopt;
        }
        return wasserstein_population(p, q, *g);
      case MetricKind::Dudley:
        if (!g || !discrete) return std::nullopt;
        return dudley_population_discrete(p, q, *g);
      case MetricKind::MMD: {
        if (!k) return std::nullopt;
        const bool gauss = p.kind() == Kind::Gaussian && q.kind() == Kind::Gaussian &&
                           k->kind() == Kernel::Kind::Gaussian;
        const bool lap = p.kind() == Kind::Exp && q.kind() == Kind::Exp && k->kind() == Kernel::Kind::Laplacian;
        if (!discrete && !gauss && !lap) return std::nullopt;
        return mmd_population(p, q, *k);
      }
      case MetricKind::TV:
        if (!discrete) return std::nullopt;
        return tv_population_discrete(p, q);
    }
  } catch (const DataError&) {
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace ipmkit
