#pragma once

#include "ipmkit/core.hpp"

#include <optional>

namespace ipmkit {

/// Largest |a_i - a_j| / rho(X_i, X_j) over anchor pairs. Infinite when two
/// anchors coincide under rho but carry different values.
double induced_lipschitz(const PointMatrix& anchors, const Eigen::VectorXd& values, const GroundMetric& g);

/// An evaluable witness function. Lipschitz variants evaluate
///   h(x) = alpha * min_i(a_i + L rho(x, X_i)) + (1 - alpha) * max_i(a_i - L rho(x, X_i)),
/// the bounded variant clips h to [-cap, cap], and the RKHS variant is
/// sum_i w_i k(x, X_i).
class Witness {
 public:
  enum class Variant { LipschitzExt, BoundedLipschitzExt, RkhsExpansion };

  Variant variant() const { return variant_; }
  const PointMatrix& anchors() const { return anchors_; }
  const Eigen::VectorXd& coefficients() const { return coeffs_; }
  double alpha() const { return alpha_; }
  double lipschitz() const { return L_; }
  double cap() const { return cap_; }
  const std::optional<GroundMetric>& ground() const { return ground_; }
  const std::optional<Kernel>& kernel() const { return kernel_; }
  Eigen::Index dim() const { return anchors_.cols(); }

  double evaluate(PointRef x) const;
  Eigen::VectorXd evaluate_batch(const PointMatrix& xs) const;

  friend Witness lipschitz_extension(PointMatrix, Eigen::VectorXd, double, double, GroundMetric);
  friend Witness bounded_lipschitz_extension(PointMatrix, Eigen::VectorXd, double, double, double, GroundMetric);
  friend Witness rkhs_expansion(PointMatrix, Eigen::VectorXd, Kernel);

 private:
  Witness() = default;

  Variant variant_ = Variant::LipschitzExt;
  PointMatrix anchors_;
  Eigen::VectorXd coeffs_;
  double alpha_ = 0.5;
  double L_ = 0.0;
  double cap_ = 0.0;
  std::optional<GroundMetric> ground_;
  std::optional<Kernel> kernel_;
};

/// Throws DataError when L is below the constant the anchors induce (slack
/// 1e-6 relative) or alpha is outside [0, 1].
Witness lipschitz_extension(PointMatrix anchors, Eigen::VectorXd values, double L, double alpha = 0.5,
                            GroundMetric g = GroundMetric::l2());

/// Additionally requires cap >= max |a_i|.
Witness bounded_lipschitz_extension(PointMatrix anchors, Eigen::VectorXd values, double L, double cap,
                                    double alpha = 0.5, GroundMetric g = GroundMetric::l2());

/// x -> sum_i w_i k(x, X_i), no normalisation.
Witness rkhs_expansion(PointMatrix anchors, Eigen::VectorXd weights, Kernel k);

/// Unit-norm MMD witness: weights Y_i / norm over the pooled points.
Witness rkhs_witness(const PooledSample& ps, const Kernel& k, double norm);

}  // namespace ipmkit
