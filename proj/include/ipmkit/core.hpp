#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ipmkit {

/// Points are stored one per row; row-major keeps each point contiguous.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Point = Eigen::RowVectorXd;
using PointRef = Eigen::Ref<const Eigen::RowVectorXd>;

/// Invalid input data (shapes, non-finite values, violated preconditions).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal solver failure, e.g. the simplex iteration cap was exceeded.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A program that has no feasible point (e.g. a non-separable training set).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Label { P, Q };

class SampleSet {
 public:
  SampleSet(PointMatrix points, Label label);

  const PointMatrix& points() const { return points_; }
  Label label() const { return label_; }
  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }

 private:
  PointMatrix points_;
  Label label_;
};

/// The two samples merged into one weighted point set. A point drawn
/// p_count times from P and q_count times from Q carries the weight
/// p_count/m - q_count/n.
struct PooledSample {
  PointMatrix points;
  Eigen::VectorXd weights;
  std::vector<int> p_count;
  std::vector<int> q_count;
  int m = 0;
  int n = 0;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
};

PooledSample pool(const SampleSet& sp, const SampleSet& sq);

template <typename DerivedA, typename DerivedB>
double l1_distance(const Eigen::MatrixBase<DerivedA>& x, const Eigen::MatrixBase<DerivedB>& y) {
  return (x - y).cwiseAbs().sum();
}

template <typename DerivedA, typename DerivedB>
double l2_distance(const Eigen::MatrixBase<DerivedA>& x, const Eigen::MatrixBase<DerivedB>& y) {
  return (x - y).norm();
}

template <typename DerivedA, typename DerivedB>
double linf_distance(const Eigen::MatrixBase<DerivedA>& x, const Eigen::MatrixBase<DerivedB>& y) {
  return (x - y).cwiseAbs().maxCoeff();
}

class GroundMetric {
 public:
  enum class Kind { L1, L2, Linf, Custom };
  using Callback = std::function<double(PointRef, PointRef)>;

  static GroundMetric l1() { return GroundMetric(Kind::L1, {}); }
  static GroundMetric l2() { return GroundMetric(Kind::L2, {}); }
  static GroundMetric linf() { return GroundMetric(Kind::Linf, {}); }
  /// The callback must be a metric; this is not verified.
  static GroundMetric custom(Callback fn);
  static GroundMetric from_name(const std::string& name);

  double operator()(PointRef x, PointRef y) const;
  Kind kind() const { return kind_; }
  std::string name() const;

 private:
  GroundMetric(Kind kind, Callback fn) : kind_(kind), fn_(std::move(fn)) {}
  Kind kind_;
  Callback fn_;
};

class Kernel {
 public:
  enum class Kind { Gaussian, Laplacian, Custom };
  using Callback = std::function<double(PointRef, PointRef)>;

  /// exp(-||x - y||_2^2 / (2 sigma^2))
  static Kernel gaussian(double sigma);
  /// exp(-alpha ||x - y||_1)
  static Kernel laplacian(double alpha);
  /// `bound` is sup_x k(x, x); it must be finite and positive.
  static Kernel custom(Callback fn, double bound);
  static Kernel from_name(const std::string& name, double param);

  double operator()(PointRef x, PointRef y) const;
  Kind kind() const { return kind_; }
  double param() const { return param_; }
  double bound() const { return bound_; }
  std::string name() const;

 private:
  Kernel(Kind kind, double param, double bound, Callback fn)
      : kind_(kind), param_(param), bound_(bound), fn_(std::move(fn)) {}
  Kind kind_;
  double param_;
  double bound_;
  Callback fn_;
};

enum class CostSource { Metric, Kernel };

struct CostMatrix {
  Eigen::MatrixXd entries;
  CostSource source = CostSource::Metric;
};

CostMatrix cost_matrix(const PointMatrix& points, const GroundMetric& g);
CostMatrix cost_matrix(const PointMatrix& points, const Kernel& k);

inline CostMatrix cost_matrix(const PooledSample& ps, const GroundMetric& g) {
  return cost_matrix(ps.points, g);
}
inline CostMatrix cost_matrix(const PooledSample& ps, const Kernel& k) {
  return cost_matrix(ps.points, k);
}

/// Throws DataError unless every entry is finite.
void require_finite(const PointMatrix& points, const char* what);

}  // namespace ipmkit
