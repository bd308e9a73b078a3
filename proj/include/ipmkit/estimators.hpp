#pragma once

#include "ipmkit/core.hpp"
#include "ipmkit/lp.hpp"
#include "ipmkit/witness.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ipmkit {

enum class MetricKind { Wasserstein, Dudley, MMD, TV };

std::string to_string(MetricKind kind);
/// Accepts wasserstein, dudley, mmd, tv.
MetricKind metric_from_name(const std::string& name);

struct EstimateReport {
  MetricKind metric = MetricKind::Wasserstein;
  double value = 0.0;
  /// Empty only for an MMD estimate of zero, whose witness is undefined.
  std::optional<Witness> witness;
  Eigen::Index n_points = 0;
  std::vector<std::string> warnings;
  std::size_t iterations = 0;
};

struct EstimatorOptions {
  MetricLpRoute route = MetricLpRoute::Auto;
  double alpha = 0.5;
  /// Solve the TV program with the simplex instead of the closed form.
  bool tv_via_lp = false;
};

/// Empirical Wasserstein distance; witness is the 1-Lipschitz extension of a*.
EstimateReport wasserstein(const PooledSample& ps, const GroundMetric& g, const EstimatorOptions& opts = {});

/// Empirical Dudley metric; witness is the bounded-Lipschitz extension of a*
/// with L = induced constant of a* and cap = max |a*_i|.
EstimateReport dudley(const PooledSample& ps, const GroundMetric& g, const EstimatorOptions& opts = {});

/// Biased V-statistic sqrt(Y^T K Y); memory is O(N).
EstimateReport mmd(const PooledSample& ps, const Kernel& k);

/// sum |Y_i|. Not a consistent estimator of the population TV distance; the
/// report always carries a warning saying so. The witness extends sign(Y_i)
/// under `g`, capped at 1.
EstimateReport tv_empirical(const PooledSample& ps, const EstimatorOptions& opts = {},
                            const GroundMetric& g = GroundMetric::l2());

using CostSpec = std::variant<GroundMetric, Kernel>;

/// Dispatches on the metric. Wasserstein and Dudley need a ground metric, MMD
/// a kernel; TV uses a ground metric only for its witness (l2 otherwise).
EstimateReport estimate(const PooledSample& ps, MetricKind metric, const CostSpec& cost,
                        const EstimatorOptions& opts = {});

/// Lower bound w b / (w - b) on TV from Wasserstein w and Dudley b.
double tv_lower_bound_wb(double w, double b);
/// Lower bound g / sqrt(C) on TV from an MMD value and C = sup k(x, x).
double tv_lower_bound_mmd(double g, double C);
/// Pinsker: KL >= tv^2 / 2.
double kl_lower_bound(double tv_lb);

}  // namespace ipmkit
