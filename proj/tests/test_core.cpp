#include "ipmkit/core.hpp"
#include "ipmkit/csv.hpp"
#include "support.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <sstream>

using namespace ipmkit;

namespace {

PointMatrix rows_1d(std::initializer_list<double> xs) {
  PointMatrix m(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return m;
}

}  // namespace

TEST(Pool, DisjointPointsGetOppositeWeights) {
  const PooledSample ps = pool(SampleSet(rows_1d({0.0}), Label::P), SampleSet(rows_1d({1.0}), Label::Q));
  ASSERT_EQ(ps.size(), 2);
  EXPECT_DOUBLE_EQ(ps.weights(0), 1.0);
  EXPECT_DOUBLE_EQ(ps.weights(1), -1.0);
}

TEST(Pool, SharedPointCancels) {
  const PooledSample ps = pool(SampleSet(rows_1d({0.0, 1.0}), Label::P), SampleSet(rows_1d({1.0, 2.0}), Label::Q));
  ASSERT_EQ(ps.size(), 3);
  EXPECT_DOUBLE_EQ(ps.weights(0), 0.5);
  EXPECT_DOUBLE_EQ(ps.weights(1), 0.0);
  EXPECT_DOUBLE_EQ(ps.weights(2), -0.5);
  EXPECT_EQ(ps.p_count[1], 1);
  EXPECT_EQ(ps.q_count[1], 1);
}

TEST(Pool, DuplicatesWithinOneSampleMerge) {
  const PooledSample ps = pool(SampleSet(rows_1d({3.0, 3.0, 4.0}), Label::P), SampleSet(rows_1d({5.0}), Label::Q));
  ASSERT_EQ(ps.size(), 3);
  EXPECT_NEAR(ps.weights(0), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(ps.p_count[0], 2);
}

TEST(Pool, NegativeZeroEqualsZero) {
  const PooledSample ps = pool(SampleSet(rows_1d({0.0}), Label::P), SampleSet(rows_1d({-0.0}), Label::Q));
  EXPECT_EQ(ps.size(), 1);
  EXPECT_DOUBLE_EQ(ps.weights(0), 0.0);
}

TEST(Pool, RejectsDimensionMismatchAndBadData) {
  EXPECT_THROW(pool(SampleSet(PointMatrix::Zero(2, 2), Label::P), SampleSet(PointMatrix::Zero(2, 3), Label::Q)),
               DataError);
  EXPECT_THROW(SampleSet(PointMatrix(0, 2), Label::P), DataError);
  PointMatrix bad = PointMatrix::Zero(2, 1);
  bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(SampleSet(bad, Label::P), DataError);
}

TEST(PoolProperty, WeightsSumToZeroAndAbsSumToTwoWhenDisjoint) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = testkit::uniform_int(rng, 1, 40);
    const int n = testkit::uniform_int(rng, 1, 40);
    const int d = testkit::uniform_int(rng, 1, 3);
    const bool disjoint = trial % 2 == 0;
    const PointMatrix xp = disjoint ? testkit::random_points(rng, m, d, 0.0, 1.0) : testkit::grid_points(rng, m, d, 3);
    const PointMatrix xq = disjoint ? testkit::random_points(rng, n, d, 2.0, 3.0) : testkit::grid_points(rng, n, d, 3);
    const PooledSample ps = pool(SampleSet(xp, Label::P), SampleSet(xq, Label::Q));
    EXPECT_NEAR(ps.weights.sum(), 0.0, 1e-12);
    EXPECT_LE(ps.weights.cwiseAbs().sum(), 2.0 + 1e-12);
    if (disjoint) EXPECT_NEAR(ps.weights.cwiseAbs().sum(), 2.0, 1e-12);
    int total = 0;
    for (std::size_t k = 0; k < ps.p_count.size(); ++k) total += ps.p_count[k] + ps.q_count[k];
    EXPECT_EQ(total, m + n);
  }
}

TEST(GroundMetric, HandValues) {
  Point x(2), y(2);
  x << 0.0, 0.0;
  y << 3.0, -4.0;
  EXPECT_DOUBLE_EQ(GroundMetric::l1()(x, y), 7.0);
  EXPECT_DOUBLE_EQ(GroundMetric::l2()(x, y), 5.0);
  EXPECT_DOUBLE_EQ(GroundMetric::linf()(x, y), 4.0);
  EXPECT_EQ(GroundMetric::from_name("linf").kind(), GroundMetric::Kind::Linf);
  EXPECT_THROW(GroundMetric::from_name("cosine"), DataError);
}

TEST(GroundMetricProperty, TriangleInequalityAndSymmetry) {
  std::mt19937_64 rng(5);
  for (const auto& g : {GroundMetric::l1(), GroundMetric::l2(), GroundMetric::linf()}) {
    for (int trial = 0; trial < 300; ++trial) {
      const PointMatrix p = testkit::random_points(rng, 3, testkit::uniform_int(rng, 1, 4));
      const double xy = g(p.row(0), p.row(1)), yz = g(p.row(1), p.row(2)), xz = g(p.row(0), p.row(2));
      EXPECT_LE(xz, xy + yz + 1e-12);
      EXPECT_DOUBLE_EQ(xy, g(p.row(1), p.row(0)));
      EXPECT_EQ(g(p.row(0), p.row(0)), 0.0);
    }
  }
}

TEST(Kernel, HandValuesAndValidation) {
  Point x(1), y(1);
  x << 0.0;
  y << 2.0;
  EXPECT_NEAR(Kernel::gaussian(1.0)(x, y), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(Kernel::laplacian(0.25)(x, y), std::exp(-0.5), 1e-15);
  EXPECT_DOUBLE_EQ(Kernel::gaussian(3.0)(x, x), 1.0);
  EXPECT_DOUBLE_EQ(Kernel::gaussian(3.0).bound(), 1.0);
  EXPECT_THROW(Kernel::gaussian(0.0), DataError);
  EXPECT_THROW(Kernel::laplacian(-1.0), DataError);
  EXPECT_THROW(Kernel::custom([](PointRef, PointRef) { return 1.0; }, 0.0), DataError);
}

TEST(KernelProperty, GramMatrixIsPositiveSemidefinite) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    const PointMatrix pts = testkit::random_points(rng, testkit::uniform_int(rng, 2, 25), testkit::uniform_int(rng, 1, 4));
    const Kernel k = trial % 2 ? Kernel::gaussian(testkit::uniform_real(rng, 0.2, 2.0))
                               : Kernel::laplacian(testkit::uniform_real(rng, 0.2, 2.0));
    const CostMatrix K = cost_matrix(pts, k);
    EXPECT_EQ(K.source, CostSource::Kernel);
    EXPECT_TRUE(K.entries.isApprox(K.entries.transpose()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K.entries);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
  }
}

TEST(CostMatrix, MetricEntries) {
  const PointMatrix pts = rows_1d({0.0, 1.5, -1.0});
  const CostMatrix D = cost_matrix(pts, GroundMetric::l1());
  EXPECT_EQ(D.source, CostSource::Metric);
  EXPECT_DOUBLE_EQ(D.entries(0, 1), 1.5);
  EXPECT_DOUBLE_EQ(D.entries(2, 1), 2.5);
  EXPECT_DOUBLE_EQ(D.entries(1, 1), 0.0);
}

TEST(CostMatrix, NonFiniteCustomValueIsRejected) {
  const auto g = GroundMetric::custom([](PointRef, PointRef) { return std::numeric_limits<double>::infinity(); });
  EXPECT_THROW(cost_matrix(rows_1d({0.0, 1.0}), g), DataError);
}

TEST(Csv, ReadsHeaderAndBlankLines) {
  std::istringstream in("x,y\n1,2\n\n3.5,-4\n");
  const PointMatrix pts = read_points_csv(in);
  ASSERT_EQ(pts.rows(), 2);
  ASSERT_EQ(pts.cols(), 2);
  EXPECT_DOUBLE_EQ(pts(1, 0), 3.5);
  EXPECT_DOUBLE_EQ(pts(1, 1), -4.0);
}

TEST(Csv, RejectsRaggedAndNonNumericRows) {
  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(read_points_csv(ragged), DataError);
  std::istringstream text("1,2\n3,abc\n");
  EXPECT_THROW(read_points_csv(text), DataError);
  std::istringstream empty("a,b\n");
  EXPECT_THROW(read_points_csv(empty), DataError);
  EXPECT_THROW(read_points_csv(std::string("/nonexistent/file.csv")), DataError);
}

TEST(Csv, LabeledRows) {
  std::istringstream in("0.5,1\n-0.5,-1\n");
  const LabeledRows rows = read_labeled_csv(in);
  ASSERT_EQ(rows.points.cols(), 1);
  EXPECT_EQ(rows.labels, (std::vector<int>{1, -1}));
  std::istringstream bad("0.5,2\n");
  EXPECT_THROW(read_labeled_csv(bad), DataError);
}

TEST(Csv, WriteThenReadRoundTripsExactly) {
  std::mt19937_64 rng(2);
  const PointMatrix pts = testkit::random_points(rng, 10, 3);
  std::stringstream buf;
  write_points_csv(buf, pts);
  EXPECT_EQ(read_points_csv(buf), pts);
}
