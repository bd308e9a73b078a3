#pragma once

#include "ipmkit/core.hpp"
#include "ipmkit/estimators.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace ipmkit {

/// Product measure on R^d with independent coordinates, or a finite discrete
/// law on a support of points.
class ProductDistribution {
 public:
  enum class Kind { Uniform, TruncExp, Gaussian, Exp, Discrete };

  /// U[a_i, b_i] per coordinate.
  static ProductDistribution uniform(Eigen::VectorXd a, Eigen::VectorXd b);
  /// Exponential with rate lambda_i conditioned on [0, c_i].
  static ProductDistribution trunc_exp(Eigen::VectorXd lambda, Eigen::VectorXd c);
  /// N(mean_i, sigma_i^2); sigma is the standard deviation.
  static ProductDistribution gaussian(Eigen::VectorXd mean, Eigen::VectorXd sigma);
  /// Exponential with rate lambda_i on [0, inf).
  static ProductDistribution exponential(Eigen::VectorXd lambda);
  static ProductDistribution discrete(PointMatrix support, Eigen::VectorXd probs);

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }
  /// a, lambda, mean or lambda, depending on the kind.
  const Eigen::VectorXd& first() const { return first_; }
  /// b, c or sigma; empty for Exp and Discrete.
  const Eigen::VectorXd& second() const { return second_; }
  const PointMatrix& support() const { return support_; }
  const Eigen::VectorXd& probs() const { return probs_; }

  /// Same law in dimension d; every coordinate must share one parameter set.
  ProductDistribution resized(Eigen::Index d) const;

 private:
  ProductDistribution() = default;
  Kind kind_ = Kind::Uniform;
  Eigen::Index dim_ = 0;
  Eigen::VectorXd first_;
  Eigen::VectorXd second_;
  PointMatrix support_;
  Eigen::VectorXd probs_;
};

std::string to_string(ProductDistribution::Kind kind);

/// n i.i.d. points. Coordinate j of point i is a function of (seed, j, i)
/// only, so the result is reproducible and independent of scheduling.
SampleSet sample(const ProductDistribution& dist, Eigen::Index n, std::uint64_t seed, Label label = Label::P);

/// Closed-form W with the L1 ground metric for (Uniform, Uniform) and
/// (TruncExp, TruncExp) pairs. For discrete pairs the finite program is
/// solved exactly under `g`.
double wasserstein_population(const ProductDistribution& p, const ProductDistribution& q,
                              const GroundMetric& g = GroundMetric::l1());

/// Area between the two empirical CDFs; one-dimensional samples only.
double wasserstein_1d_cdf(const SampleSet& s1, const SampleSet& s2);

/// Closed-form MMD for Gaussian pairs under the Gaussian kernel and
/// exponential pairs under the Laplacian kernel; exact finite sum for
/// discrete pairs.
double mmd_population(const ProductDistribution& p, const ProductDistribution& q, const Kernel& k);

/// Dudley metric between two discrete laws via the finite program.
double dudley_population_discrete(const ProductDistribution& p, const ProductDistribution& q,
                                  const GroundMetric& g);

/// Total variation between two discrete laws.
double tv_population_discrete(const ProductDistribution& p, const ProductDistribution& q);

/// The population value for a (p, q, metric, ground-or-kernel) pairing, or
/// nullopt when no oracle covers it.
std::optional<double> population_value(const ProductDistribution& p, const ProductDistribution& q,
                                       MetricKind metric, const CostSpec& cost);

}  // namespace ipmkit
