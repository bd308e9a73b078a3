#include "ipmkit/estimators.hpp"
#include "ipmkit/oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace ipmkit;

namespace {

PooledSample pooled_1d(std::initializer_list<double> p, std::initializer_list<double> q) {
  auto to_matrix = [](std::initializer_list<double> xs) {
    PointMatrix m(static_cast<Eigen::Index>(xs.size()), 1);
    Eigen::Index i = 0;
    for (double x : xs) m(i++, 0) = x;
    return m;
  };
  return pool(SampleSet(to_matrix(p), Label::P), SampleSet(to_matrix(q), Label::Q));
}

PooledSample random_pooled(std::mt19937_64& rng, int max_each, int d, bool ties) {
  const int m = testkit::uniform_int(rng, 1, max_each), n = testkit::uniform_int(rng, 1, max_each);
  const PointMatrix xp = ties ? testkit::grid_points(rng, m, d, 3) : testkit::random_points(rng, m, d);
  const PointMatrix xq = ties ? testkit::grid_points(rng, n, d, 3) : testkit::random_points(rng, n, d, -0.5, 1.5);
  return pool(SampleSet(xp, Label::P), SampleSet(xq, Label::Q));
}

double resubstituted(const PooledSample& ps, const EstimateReport& r) {
  return ps.weights.dot(r.witness->evaluate_batch(ps.points));
}

}  // namespace

TEST(Estimators, PointMassesHandValues) {
  const PooledSample ps = pooled_1d({0.0}, {3.0});
  const auto g = GroundMetric::l1();
  EXPECT_NEAR(wasserstein(ps, g).value, 3.0, 1e-12);
  // min(3b, 2c) with b + c = 1 peaks at b = 0.4.
  EXPECT_NEAR(dudley(ps, g).value, 1.2, 1e-12);
  EXPECT_DOUBLE_EQ(tv_empirical(ps).value, 2.0);
  EXPECT_NEAR(mmd(ps, Kernel::gaussian(1.0)).value, std::sqrt(2.0 - 2.0 * std::exp(-4.5)), 1e-15);
}

TEST(Estimators, IdenticalSamplesGiveZero) {
  const PooledSample ps = pooled_1d({1.0, 2.0, 2.0}, {2.0, 1.0, 2.0});
  for (auto metric : {MetricKind::Wasserstein, MetricKind::Dudley, MetricKind::TV}) {
    const EstimateReport r = estimate(ps, metric, GroundMetric::l2());
    EXPECT_EQ(r.value, 0.0) << to_string(metric);
    EXPECT_TRUE(r.witness.has_value());
  }
  const EstimateReport r = mmd(ps, Kernel::gaussian(1.0));
  EXPECT_EQ(r.value, 0.0);
  EXPECT_FALSE(r.witness.has_value());
}

TEST(Estimators, DispatchChecksCostKind) {
  const PooledSample ps = pooled_1d({0.0}, {1.0});
  EXPECT_THROW(estimate(ps, MetricKind::Wasserstein, Kernel::gaussian(1.0)), DataError);
  EXPECT_THROW(estimate(ps, MetricKind::Dudley, Kernel::gaussian(1.0)), DataError);
  EXPECT_THROW(estimate(ps, MetricKind::MMD, GroundMetric::l1()), DataError);
  EXPECT_NO_THROW(estimate(ps, MetricKind::TV, Kernel::gaussian(1.0)));
  EXPECT_EQ(metric_from_name("dudley"), MetricKind::Dudley);
  EXPECT_THROW(metric_from_name("kl"), DataError);
}

TEST(Estimators, TvAlwaysWarns) {
  const EstimateReport r = tv_empirical(pooled_1d({0.0}, {0.0}));
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("not a consistent estimator"), std::string::npos);
}

TEST(EstimatorsProperty, WassersteinMatchesCdfAreaInOneDimension) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = testkit::uniform_int(rng, 1, 30), n = testkit::uniform_int(rng, 1, 30);
    const SampleSet sp(testkit::random_points(rng, m, 1), Label::P), sq(testkit::random_points(rng, n, 1), Label::Q);
    EXPECT_NEAR(wasserstein(pool(sp, sq), GroundMetric::l1()).value, wasserstein_1d_cdf(sp, sq), 1e-9);
  }
}

TEST(EstimatorsProperty, MmdMatchesNaiveDoubleLoop) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const PooledSample ps = random_pooled(rng, 25, testkit::uniform_int(rng, 1, 4), trial % 4 == 0);
    const Kernel k = trial % 2 ? Kernel::gaussian(testkit::uniform_real(rng, 0.3, 3.0))
                               : Kernel::laplacian(testkit::uniform_real(rng, 0.3, 3.0));
    const double want = testkit::naive_mmd(ps.points, ps.weights, k);
    EXPECT_NEAR(mmd(ps, k).value, want, 1e-12 * std::max(want, 1e-300));
  }
}

TEST(EstimatorsProperty, OrderingBetweenMetrics) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 80; ++trial) {
    const PooledSample ps = random_pooled(rng, 10, testkit::uniform_int(rng, 1, 3), trial % 3 == 0);
    const auto g = trial % 2 ? GroundMetric::l1() : GroundMetric::linf();
    const double w = wasserstein(ps, g).value, b = dudley(ps, g).value, tv = tv_empirical(ps).value;
    EXPECT_LE(b, w + 1e-9) << "trial " << trial;
    EXPECT_LE(b, tv + 1e-9) << "trial " << trial;
    EXPECT_LE(tv, 2.0 + 1e-12);
    if (w > 0.0) {
      const double lb = tv_lower_bound_wb(w, b);
      EXPECT_GE(lb, b);
      EXPECT_LE(lb, tv + 1e-7) << "trial " << trial;
    }
  }
}

TEST(EstimatorsProperty, SymmetricUnderSwap) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 40; ++trial) {
    const PointMatrix xp = testkit::random_points(rng, testkit::uniform_int(rng, 1, 10), 2);
    const PointMatrix xq = testkit::random_points(rng, testkit::uniform_int(rng, 1, 10), 2);
    const PooledSample a = pool(SampleSet(xp, Label::P), SampleSet(xq, Label::Q));
    const PooledSample b = pool(SampleSet(xq, Label::P), SampleSet(xp, Label::Q));
    const auto g = GroundMetric::l2();
    EXPECT_NEAR(wasserstein(a, g).value, wasserstein(b, g).value, 1e-9);
    EXPECT_NEAR(dudley(a, g).value, dudley(b, g).value, 1e-9);
    EXPECT_NEAR(mmd(a, Kernel::gaussian(1.0)).value, mmd(b, Kernel::gaussian(1.0)).value, 1e-12);
  }
}

TEST(EstimatorsProperty, WitnessReproducesEstimate) {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 60; ++trial) {
    const PooledSample ps = random_pooled(rng, 10, testkit::uniform_int(rng, 1, 3), trial % 3 == 0);
    const auto g = GroundMetric::l1();
    const EstimateReport w = wasserstein(ps, g), b = dudley(ps, g), tv = tv_empirical(ps, {}, g);
    EXPECT_NEAR(resubstituted(ps, w), w.value, 1e-9);
    EXPECT_NEAR(resubstituted(ps, b), b.value, 1e-9);
    EXPECT_NEAR(resubstituted(ps, tv), tv.value, 1e-12);
    const EstimateReport k = mmd(ps, Kernel::laplacian(1.0));
    if (k.witness) EXPECT_NEAR(resubstituted(ps, k), k.value, 1e-12);
    // The Dudley witness is bounded by c* and Lipschitz with constant b*.
    EXPECT_LE(b.witness->cap() + b.witness->lipschitz(), 1.0 + 1e-7);
  }
}

TEST(EstimatorsProperty, TvLinearProgramMatchesClosedForm) {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 60; ++trial) {
    const PooledSample ps = random_pooled(rng, 15, 1, trial % 2 == 0);
    EstimatorOptions opts;
    opts.tv_via_lp = true;
    EXPECT_NEAR(tv_empirical(ps, opts).value, tv_empirical(ps).value, 1e-12);
  }
}

TEST(EstimatorsProperty, WassersteinRoutesAgree) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    const PooledSample ps = random_pooled(rng, 12, 2, trial % 2 == 0);
    EstimatorOptions lp;
    lp.route = MetricLpRoute::Simplex;
    EXPECT_NEAR(wasserstein(ps, GroundMetric::l2()).value, wasserstein(ps, GroundMetric::l2(), lp).value, 1e-7);
  }
}

TEST(TvBounds, HandValuesAndErrors) {
  EXPECT_DOUBLE_EQ(tv_lower_bound_wb(1.0, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(tv_lower_bound_wb(0.0, 0.0), 0.0);
  EXPECT_THROW(tv_lower_bound_wb(0.5, 1.0), DataError);
  EXPECT_THROW(tv_lower_bound_wb(-1.0, 0.0), DataError);
  EXPECT_DOUBLE_EQ(tv_lower_bound_mmd(0.5, 4.0), 0.25);
  EXPECT_THROW(tv_lower_bound_mmd(0.5, 0.0), DataError);
  EXPECT_DOUBLE_EQ(kl_lower_bound(1.0), 0.5);
  EXPECT_THROW(kl_lower_bound(-0.1), DataError);
}

TEST(TvBounds, LaplacianPopulationValueGivesStatedBound) {
  const auto p = ProductDistribution::exponential(Eigen::VectorXd::Constant(1, 3.0));
  const auto q = ProductDistribution::exponential(Eigen::VectorXd::Constant(1, 1.0));
  const Kernel k = Kernel::laplacian(0.25);
  EXPECT_NEAR(tv_lower_bound_mmd(mmd_population(p, q, k), k.bound()), 0.2481, 5e-4);
}
