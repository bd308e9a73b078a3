#pragma once

#include "ipmkit/estimators.hpp"
#include "ipmkit/oracles.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ipmkit {

struct Sweep {
  enum class Kind { SampleSize, Dimension };
  Kind kind = Kind::SampleSize;
  /// Total sample sizes N (m = n = N/2) or dimensions d.
  std::vector<Eigen::Index> values;
  /// Fixed N for dimension sweeps.
  Eigen::Index fixed_n = 0;

  std::string name() const { return kind == Kind::SampleSize ? "N" : "d"; }
};

inline const std::vector<Eigen::Index> kDefaultSampleSizes{50, 100, 200, 400, 800, 1600};

struct ExperimentSpec {
  std::string id;
  ProductDistribution p;
  ProductDistribution q;
  MetricKind metric;
  CostSpec cost;
  Sweep sweep;
  int replications = 20;
  std::uint64_t seed = 0;
};

/// Checks sizes, parity and caps; throws DataError.
void validate(const ExperimentSpec& spec);

struct ExperimentRow {
  Eigen::Index sweep_value = 0;
  int replication = 0;
  double estimate = 0.0;
  std::optional<double> population;
  double wall_ms = 0.0;
};

struct ExperimentResult {
  std::string id;
  std::string sweep_name;
  /// Ordered by (sweep value position, replication).
  std::vector<ExperimentRow> rows;
};

struct RunOptions {
  unsigned threads = 1;
  /// Record wall time per estimate. Off by default so that repeated runs
  /// produce identical files.
  bool timing = false;
};

/// Samples, pools and estimates every (sweep value, replication) pair. The
/// samples for a pair depend only on (seed, sweep value, replication), so
/// the rows do not depend on the thread count.
ExperimentResult run(const ExperimentSpec& spec, const RunOptions& options = {});

struct SummaryRow {
  Eigen::Index sweep_value = 0;
  double mean = 0.0;
  /// Sample standard deviation; 0 for a single replication.
  double stddev = 0.0;
  std::optional<double> population;
  /// |mean - population|.
  std::optional<double> abs_error;
  /// Mean over replications of |estimate - population|.
  std::optional<double> mean_abs_error;
};

std::vector<SummaryRow> summarize(const ExperimentResult& result);

/// Header sweep_name,sweep_value,replication,estimate,population,abs_error,wall_ms.
void write_csv(std::ostream& out, const ExperimentResult& result);
void write_summary(std::ostream& out, const ExperimentResult& result);

}  // namespace ipmkit
