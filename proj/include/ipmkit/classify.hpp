#pragma once

#include "ipmkit/core.hpp"
#include "ipmkit/estimators.hpp"
#include "ipmkit/witness.hpp"

#include <vector>

namespace ipmkit {

class LabeledSample {
 public:
  /// Labels must be +1 or -1, one per point.
  LabeledSample(PointMatrix points, std::vector<int> labels);

  const PointMatrix& points() const { return points_; }
  const std::vector<int>& labels() const { return labels_; }
  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }
  Eigen::Index positives() const { return positives_; }
  Eigen::Index negatives() const { return size() - positives_; }
  /// Fraction of positive labels.
  double epsilon() const { return static_cast<double>(positives_) / static_cast<double>(size()); }

  /// Throws DataError unless both labels occur.
  void require_both_classes() const;
  /// Positive points as the P sample, negative points as the Q sample.
  PooledSample as_pooled() const;

 private:
  PointMatrix points_;
  std::vector<int> labels_;
  Eigen::Index positives_ = 0;
};

enum class ClassifierKind { Parzen, LipschitzMargin, BoundedLipschitzMargin };

std::string to_string(ClassifierKind kind);

struct Classifier {
  ClassifierKind kind;
  Witness discriminant;
  /// 1/||f|| for the margin kinds, 0 for Parzen.
  double margin = 0.0;

  /// +1 when the discriminant is positive, -1 otherwise (including ties).
  int predict(PointRef x) const;
  std::vector<int> predict_batch(const PointMatrix& xs) const;
};

/// Empirical L-risk of the report's witness under L_1(a) = -a/eps and
/// L_-1(a) = a/(1 - eps), eps = m/(m+n). Equals -est.value. Throws
/// DataError when the report has no witness.
double l_risk_check(const PooledSample& ps, const EstimateReport& est);

/// Discriminant (1/m) sum_{+} k(., X_i) - (1/n) sum_{-} k(., X_i).
Classifier parzen_train(const LabeledSample& ls, const Kernel& k);

struct MeanDistances {
  double to_positive;
  double to_negative;
};

/// Squared RKHS distances from k(., x) to the two class mean embeddings.
MeanDistances mean_distance_interpretation(const LabeledSample& ls, const Kernel& k, PointRef x);

/// Smallest-norm function with Y_i f(X_i) >= 1, solved at the training points
/// and extended. The plain form minimises the Lipschitz constant, the bounded
/// form minimises Lipschitz constant plus sup norm. Same-label duplicates are
/// merged; a point carrying both labels makes the program infeasible and
/// raises InfeasibleError.
Classifier lipschitz_margin_train(const LabeledSample& ls, const GroundMetric& g, bool bounded);

struct MarginBound {
  double margin;
  /// W/2 for the plain classifier, beta/2 for the bounded one, with P the
  /// positive and Q the negative points.
  double bound;
  bool holds;
};

MarginBound margin_bound_check(const LabeledSample& ls, const GroundMetric& g, bool bounded);
MarginBound margin_bound_check(const LabeledSample& ls, const Classifier& c, const GroundMetric& g);

}  // namespace ipmkit
