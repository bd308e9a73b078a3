#include "ipmkit/bench.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace ipmkit;

namespace {

ExperimentSpec uniform_spec(int d, std::vector<Eigen::Index> sizes, int reps, std::uint64_t seed = 1) {
  return ExperimentSpec{"uniform_w",
                        ProductDistribution::uniform(Eigen::VectorXd::Constant(d, -0.5), Eigen::VectorXd::Constant(d, 0.5)),
                        ProductDistribution::uniform(Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d)),
                        MetricKind::Wasserstein,
                        GroundMetric::l1(),
                        Sweep{Sweep::Kind::SampleSize, std::move(sizes), 0},
                        reps,
                        seed};
}

ExperimentSpec gaussian_mmd_spec(std::vector<Eigen::Index> sizes, int reps) {
  const double s = std::sqrt(2.0);
  return ExperimentSpec{"gaussian_mmd",
                        ProductDistribution::gaussian(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, s)),
                        ProductDistribution::gaussian(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, s)),
                        MetricKind::MMD,
                        Kernel::gaussian(1.0),
                        Sweep{Sweep::Kind::SampleSize, std::move(sizes), 0},
                        reps,
                        5};
}

std::string csv_of(const ExperimentResult& r) {
  std::ostringstream out;
  write_csv(out, r);
  return out.str();
}

}  // namespace

TEST(Bench, ValidationRejectsBadSpecs) {
  EXPECT_THROW(validate(uniform_spec(1, {51}, 1)), DataError);
  EXPECT_THROW(validate(uniform_spec(1, {0}, 1)), DataError);
  EXPECT_THROW(validate(uniform_spec(1, {2002}, 1)), DataError);
  EXPECT_THROW(validate(uniform_spec(1, {}, 1)), DataError);
  EXPECT_THROW(validate(uniform_spec(1, {50}, 0)), DataError);
  ExperimentSpec mmd = gaussian_mmd_spec({20000}, 1);
  EXPECT_NO_THROW(validate(mmd));
  mmd.sweep.values = {20002};
  EXPECT_THROW(validate(mmd), DataError);
  ExperimentSpec dims = uniform_spec(1, {1, 2}, 1);
  dims.sweep.kind = Sweep::Kind::Dimension;
  dims.sweep.fixed_n = 7;
  EXPECT_THROW(validate(dims), DataError);
  dims.sweep.fixed_n = 8;
  EXPECT_NO_THROW(validate(dims));
}

TEST(Bench, OneRowPerSweepValueAndReplicationInOrder) {
  const ExperimentResult r = run(uniform_spec(1, {20, 10, 40}, 3));
  ASSERT_EQ(r.rows.size(), 9u);
  EXPECT_EQ(r.sweep_name, "N");
  const std::vector<Eigen::Index> order{20, 10, 40};
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_EQ(r.rows[i].sweep_value, order[i / 3]);
    EXPECT_EQ(r.rows[i].replication, static_cast<int>(i % 3));
    ASSERT_TRUE(r.rows[i].population.has_value());
    EXPECT_DOUBLE_EQ(*r.rows[i].population, 0.5);
    EXPECT_EQ(r.rows[i].wall_ms, 0.0);
  }
}

TEST(Bench, DeterministicAcrossRunsAndThreadCounts) {
  const ExperimentSpec spec = uniform_spec(2, {10, 30}, 5, 99);
  const std::string one = csv_of(run(spec));
  EXPECT_EQ(one, csv_of(run(spec)));
  EXPECT_EQ(one, csv_of(run(spec, {4, false})));
  EXPECT_NE(one, csv_of(run(uniform_spec(2, {10, 30}, 5, 100))));
}

TEST(Bench, SingleReplicationTwiceGivesIdenticalBytes) {
  EXPECT_EQ(csv_of(run(uniform_spec(1, {50}, 1, 3))), csv_of(run(uniform_spec(1, {50}, 1, 3))));
}

TEST(Bench, TimingIsOptIn) {
  const ExperimentResult r = run(gaussian_mmd_spec({400}, 2), {1, true});
  for (const auto& row : r.rows) EXPECT_GT(row.wall_ms, 0.0);
}

TEST(Bench, MissingPopulationIsRecordedNotFatal) {
  ExperimentSpec spec = gaussian_mmd_spec({10}, 2);
  spec.metric = MetricKind::Wasserstein;
  spec.cost = GroundMetric::l1();
  const ExperimentResult r = run(spec);
  for (const auto& row : r.rows) EXPECT_FALSE(row.population.has_value());
  const std::string csv = csv_of(r);
  EXPECT_NE(csv.find(",0,"), std::string::npos);
  EXPECT_NE(csv.find(",,,0.000"), std::string::npos);
  const auto summary = summarize(r);
  ASSERT_EQ(summary.size(), 1u);
  EXPECT_FALSE(summary[0].abs_error.has_value());
}

TEST(Bench, CsvHeader) {
  const std::string csv = csv_of(run(uniform_spec(1, {4}, 1)));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "sweep_name,sweep_value,replication,estimate,population,abs_error,wall_ms");
}

TEST(Summarize, SingleReplicationHasZeroStd) {
  ExperimentResult r{"x", "N", {{10, 0, 0.7, 0.5, 0.0}}};
  const auto s = summarize(r);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].stddev, 0.0);
  EXPECT_DOUBLE_EQ(s[0].mean, 0.7);
  EXPECT_NEAR(*s[0].abs_error, 0.2, 1e-15);
}

TEST(Summarize, ConstantEstimatesAndErrors) {
  ExperimentResult r{"x", "N", {{10, 0, 2.0, 1.0, 0.0}, {10, 1, 2.0, 1.0, 0.0}, {20, 0, 0.0, 1.0, 0.0}, {20, 1, 3.0, 1.0, 0.0}}};
  const auto s = summarize(r);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s[0].mean, 2.0);
  EXPECT_DOUBLE_EQ(s[0].stddev, 0.0);
  EXPECT_DOUBLE_EQ(s[1].mean, 1.5);
  EXPECT_NEAR(s[1].stddev, std::sqrt(4.5), 1e-15);
  EXPECT_DOUBLE_EQ(*s[1].abs_error, 0.5);
  EXPECT_DOUBLE_EQ(*s[1].mean_abs_error, 1.5);
  EXPECT_THROW(summarize(ExperimentResult{}), DataError);
}

TEST(BenchConvergence, GaussianMmdAtThousandPoints) {
  const auto s = summarize(run(gaussian_mmd_spec({1000}, 20)));
  const double pop = std::pow(5.0, -0.25) * std::sqrt(2.0 - 2.0 * std::exp(-0.1));
  EXPECT_NEAR(*s[0].population, pop, 1e-14);
  EXPECT_LT(*s[0].abs_error, 0.03);
}

TEST(BenchConvergence, WassersteinBiasGrowsWithDimension) {
  ExperimentSpec spec = uniform_spec(1, {1, 10}, 3);
  spec.sweep.kind = Sweep::Kind::Dimension;
  spec.sweep.fixed_n = 500;
  const ExperimentResult r = run(spec);
  EXPECT_EQ(r.sweep_name, "d");
  const auto s = summarize(r);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(*s[1].population, 5.0);
  EXPECT_GT(*s[1].mean_abs_error, *s[0].mean_abs_error);
}
