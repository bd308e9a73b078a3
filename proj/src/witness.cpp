#include "ipmkit/witness.hpp"

#include <cmath>

namespace ipmkit {

double induced_lipschitz(const PointMatrix& anchors, const Eigen::VectorXd& values, const GroundMetric& g) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < anchors.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < anchors.rows(); ++j) {
      const double gap = std::abs(values(i) - values(j));
      if (gap == 0.0) continue;
      const double r = g(anchors.row(i), anchors.row(j));
      if (r == 0.0) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, gap / r);
    }
  }
  return worst;
}

namespace {

void check_anchors(const PointMatrix& anchors, const Eigen::VectorXd& values) {
  if (anchors.rows() == 0) throw DataError("witness needs at least one anchor");
  if (anchors.rows() != values.size()) {
    throw DataError("witness has " + std::to_string(anchors.rows()) + " anchors but " +
                    std::to_string(values.size()) + " coefficients");
  }
  require_finite(anchors, "witness anchors");
  if (!values.allFinite()) throw DataError("witness coefficients must be finite");
}

void check_extension(const PointMatrix& anchors, const Eigen::VectorXd& values, double L, double alpha,
                     const GroundMetric& g) {
  check_anchors(anchors, values);
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DataError("alpha must lie in [0, 1]");
  if (!std::isfinite(L) || L < 0.0) throw DataError("Lipschitz constant must be finite and non-negative");
  const double induced = induced_lipschitz(anchors, values, g);
  if (L < induced - 1e-6 * std::max(1.0, induced)) {
    throw DataError("Lipschitz constant " + std::to_string(L) + " is below the anchors' induced constant " +
                    std::to_string(induced));
  }
}

}  // namespace

Witness lipschitz_extension(PointMatrix anchors, Eigen::VectorXd values, double L, double alpha, GroundMetric g) {
  check_extension(anchors, values, L, alpha, g);
  Witness w;
  w.variant_ = Witness::Variant::LipschitzExt;
  w.anchors_ = std::move(anchors);
  w.coeffs_ = std::move(values);
  w.alpha_ = alpha;
  w.L_ = L;
  w.cap_ = std::numeric_limits<double>::infinity();
  w.ground_ = std::move(g);
  return w;
}

Witness bounded_lipschitz_extension(PointMatrix anchors, Eigen::VectorXd values, double L, double cap,
                                    double alpha, GroundMetric g) {
  check_extension(anchors, values, L, alpha, g);
  if (!std::isfinite(cap) || cap < values.cwiseAbs().maxCoeff()) {
    throw DataError("cap " + std::to_string(cap) + " is below max |a_i| = " +
                    std::to_string(values.cwiseAbs().maxCoeff()));
  }
  Witness w = lipschitz_extension(std::move(anchors), std::move(values), L, alpha, std::move(g));
  w.variant_ = Witness::Variant::BoundedLipschitzExt;
  w.cap_ = cap;
  return w;
}

Witness rkhs_expansion(PointMatrix anchors, Eigen::VectorXd weights, Kernel k) {
  check_anchors(anchors, weights);
  Witness w;
  w.variant_ = Witness::Variant::RkhsExpansion;
  w.anchors_ = std::move(anchors);
  w.coeffs_ = std::move(weights);
  w.kernel_ = std::move(k);
  return w;
}

Witness rkhs_witness(const PooledSample& ps, const Kernel& k, double norm) {
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DataError("RKHS witness needs a positive norm (the MMD estimate is zero)");
  }
  return rkhs_expansion(ps.points, ps.weights / norm, k);
}

double Witness::evaluate(PointRef x) const {
  if (x.size() != dim()) {
    throw DataError("witness expects points of dimension " + std::to_string(dim()) + ", got " +
                    std::to_string(x.size()));
  }
  if (variant_ == Variant::RkhsExpansion) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < anchors_.rows(); ++i) sum += coeffs_(i) * (*kernel_)(x, anchors_.row(i));
    return sum;
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < anchors_.rows(); ++i) {
    const double r = (*ground_)(x, anchors_.row(i));
    if (r == 0.0) return coeffs_(i);
    lo = std::min(lo, coeffs_(i) + L_ * r);
    hi = std::max(hi, coeffs_(i) - L_ * r);
  }
  const double h = alpha_ * lo + (1.0 - alpha_) * hi;
  if (variant_ == Variant::BoundedLipschitzExt) return std::clamp(h, -cap_, cap_);
  return h;
}

Eigen::VectorXd Witness::evaluate_batch(const PointMatrix& xs) const {
  Eigen::VectorXd out(xs.rows());
  for (Eigen::Index i = 0; i < xs.rows(); ++i) out(i) = evaluate(xs.row(i));
  return out;
}

}  // namespace ipmkit
