#include "ipmkit/core.hpp"

#include <cmath>
#include <map>

namespace ipmkit {

void require_finite(const PointMatrix& points, const char* what) {
  if (!points.allFinite()) {
    throw DataError(std::string(what) + ": non-finite coordinate");
  }
}

SampleSet::SampleSet(PointMatrix points, Label label) : points_(std::move(points)), label_(label) {
  if (points_.rows() == 0) {
    throw DataError("sample set is empty");
  }
  if (points_.cols() == 0) {
    throw DataError("points must have dimension >= 1");
  }
  require_finite(points_, "sample set");
}

namespace {

struct LexLess {
  bool operator()(const std::vector<double>& a, const std::vector<double>& b) const {
    // operator< on doubles treats -0.0 and 0.0 as equal, which is what
    // exact coordinate equality asks for.
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

}  // namespace

PooledSample pool(const SampleSet& sp, const SampleSet& sq) {
  if (sp.dim() != sq.dim()) {
    throw DataError("dimension mismatch: P has d=" + std::to_string(sp.dim()) +
                    ", Q has d=" + std::to_string(sq.dim()));
  }
  const Eigen::Index d = sp.dim();
  PooledSample ps;
  ps.m = static_cast<int>(sp.size());
  ps.n = static_cast<int>(sq.size());

  std::map<std::vector<double>, std::size_t, LexLess> seen;
  std::vector<Eigen::Index> source_rows;
  std::vector<const PointMatrix*> source_sets;

  auto visit = [&](const PointMatrix& pts, bool from_p) {
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      std::vector<double> key(pts.row(i).data(), pts.row(i).data() + d);
      auto [it, inserted] = seen.emplace(std::move(key), ps.p_count.size());
      if (inserted) {
        ps.p_count.push_back(0);
        ps.q_count.push_back(0);
        source_rows.push_back(i);
        source_sets.push_back(&pts);
      }
      (from_p ? ps.p_count : ps.q_count)[it->second] += 1;
    }
  };
  visit(sp.points(), true);
  visit(sq.points(), false);

  const auto count = static_cast<Eigen::Index>(source_rows.size());
  ps.points.resize(count, d);
  ps.weights.resize(count);
  for (Eigen::Index k = 0; k < count; ++k) {
    ps.points.row(k) = source_sets[k]->row(source_rows[k]);
    ps.weights(k) = static_cast<double>(ps.p_count[k]) / ps.m -
                    static_cast<double>(ps.q_count[k]) / ps.n;
  }
  return ps;
}

GroundMetric GroundMetric::custom(Callback fn) {
  if (!fn) {
    throw DataError("custom metric requires a callback");
  }
  return GroundMetric(Kind::Custom, std::move(fn));
}

GroundMetric GroundMetric::from_name(const std::string& name) {
  if (name == "l1") return l1();
  if (name == "l2") return l2();
  if (name == "linf") return linf();
  throw DataError("unknown ground metric '" + name + "' (expected l1, l2 or linf)");
}

double GroundMetric::operator()(PointRef x, PointRef y) const {
  switch (kind_) {
    case Kind::L1:
      return l1_distance(x, y);
    case Kind::L2:
      return l2_distance(x, y);
    case Kind::Linf:
      return linf_distance(x, y);
    case Kind::Custom:
      return fn_(x, y);
  }
  return 0.0;
}

std::string GroundMetric::name() const {
  switch (kind_) {
    case Kind::L1:
      return "l1";
    case Kind::L2:
      return "l2";
    case Kind::Linf:
      return "linf";
    case Kind::Custom:
      return "custom";
  }
  return "custom";
}

Kernel Kernel::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DataError("gaussian kernel requires sigma > 0");
  }
  return Kernel(Kind::Gaussian, sigma, 1.0, {});
}

Kernel Kernel::laplacian(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DataError("laplacian kernel requires alpha > 0");
  }
  return Kernel(Kind::Laplacian, alpha, 1.0, {});
}

Kernel Kernel::custom(Callback fn, double bound) {
  if (!fn) {
    throw DataError("custom kernel requires a callback");
  }
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw DataError("custom kernel requires a finite positive bound");
  }
  return Kernel(Kind::Custom, 0.0, bound, std::move(fn));
}

Kernel Kernel::from_name(const std::string& name, double param) {
  if (name == "gaussian") return gaussian(param);
  if (name == "laplacian") return laplacian(param);
  throw DataError("unknown kernel '" + name + "' (expected gaussian or laplacian)");
}

double Kernel::operator()(PointRef x, PointRef y) const {
  switch (kind_) {
    case Kind::Gaussian:
      return std::exp(-(x - y).squaredNorm() / (2.0 * param_ * param_));
    case Kind::Laplacian:
      return std::exp(-param_ * l1_distance(x, y));
    case Kind::Custom:
      return fn_(x, y);
  }
  return 0.0;
}

std::string Kernel::name() const {
  switch (kind_) {
    case Kind::Gaussian:
      return "gaussian";
    case Kind::Laplacian:
      return "laplacian";
    case Kind::Custom:
      return "custom";
  }
  return "custom";
}

namespace {

template <typename Fn>
Eigen::MatrixXd symmetric_pairwise(const PointMatrix& points, Fn&& fn, const char* what) {
  const Eigen::Index count = points.rows();
  Eigen::MatrixXd out(count, count);
  for (Eigen::Index j = 0; j < count; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v = fn(points.row(i), points.row(j));
      if (!std::isfinite(v)) {
        throw DataError(std::string(what) + " produced a non-finite value");
      }
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

}  // namespace

CostMatrix cost_matrix(const PointMatrix& points, const GroundMetric& g) {
  CostMatrix cm;
  cm.source = CostSource::Metric;
  cm.entries = symmetric_pairwise(points, g, "ground metric");
  return cm;
}

CostMatrix cost_matrix(const PointMatrix& points, const Kernel& k) {
  CostMatrix cm;
  cm.source = CostSource::Kernel;
  cm.entries = symmetric_pairwise(points, k, "kernel");
  return cm;
}

}  // namespace ipmkit
