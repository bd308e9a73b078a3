#include "ipmkit/bench.hpp"
#include "ipmkit/classify.hpp"
#include "ipmkit/csv.hpp"
#include "ipmkit/estimators.hpp"
#include "ipmkit/json_io.hpp"
#include "ipmkit/oracles.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace ipmkit;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kSolver = 3, kInfeasible = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CostFlags {
  std::string ground = "l1";
  std::string kernel = "gaussian";
  double kernel_param = 1.0;

  CostSpec for_metric(MetricKind metric) const {
    if (metric == MetricKind::MMD) return Kernel::from_name(kernel, kernel_param);
    return GroundMetric::from_name(ground);
  }
};

void add_cost_flags(CLI::App* cmd, CostFlags& f) {
  cmd->add_option("--ground", f.ground, "Ground metric for wasserstein, dudley and tv witnesses")
      ->check(CLI::IsMember({"l1", "l2", "linf"}))
      ->capture_default_str();
  cmd->add_option("--kernel", f.kernel, "Kernel for mmd and parzen")
      ->check(CLI::IsMember({"gaussian", "laplacian"}))
      ->capture_default_str();
  cmd->add_option("--kernel-param", f.kernel_param, "Gaussian sigma or Laplacian alpha")->capture_default_str();
}

// Writes to the named file, or to stdout when the name is empty.
void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
}

json load_json_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return parse_json(arg, "inline JSON");
  return read_json_file(arg);
}

void log_warnings(const EstimateReport& r) {
  for (const auto& w : r.warnings) spdlog::warn("{}", w);
}

int cmd_estimate(const std::string& p_path, const std::string& q_path, const std::string& metric_name,
                 const CostFlags& flags, const std::string& out, const std::string& witness_out) {
  const MetricKind metric = metric_from_name(metric_name);
  const SampleSet sp(read_points_csv(p_path), Label::P);
  const SampleSet sq(read_points_csv(q_path), Label::Q);
  const PooledSample ps = pool(sp, sq);
  spdlog::info("pooled {} + {} points into {} distinct points (d={})", sp.size(), sq.size(), ps.size(), ps.dim());
  const EstimateReport r = estimate(ps, metric, flags.for_metric(metric));
  log_warnings(r);
  emit(out, to_json(r).dump(2) + "\n");
  if (!witness_out.empty()) {
    if (!r.witness) spdlog::warn("estimate is zero; the witness is undefined and written as null");
    emit(witness_out, (r.witness ? to_json(*r.witness) : json(nullptr)).dump(2) + "\n");
  }
  return kOk;
}

int cmd_witness_eval(const std::string& witness_path, const std::string& points_path, const std::string& out) {
  const Witness w = witness_from_json(read_json_file(witness_path));
  const PointMatrix pts = read_points_csv(points_path);
  const Eigen::VectorXd values = w.evaluate_batch(pts);
  std::string text;
  char buf[32];
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g\n", values(i));
    text += buf;
  }
  emit(out, text);
  return kOk;
}

int cmd_classify(const std::string& train_path, const std::string& test_path, const std::string& rule,
                 const CostFlags& flags, const std::string& out, const std::string& report_path) {
  LabeledRows rows = read_labeled_csv(train_path);
  const LabeledSample train(std::move(rows.points), std::move(rows.labels));
  const PointMatrix test = read_points_csv(test_path);
  if (test.cols() != train.dim()) throw DataError("test points have a different dimension than the training set");

  const GroundMetric g = GroundMetric::from_name(flags.ground);
  const Classifier c = rule == "parzen" ? parzen_train(train, Kernel::from_name(flags.kernel, flags.kernel_param))
                                        : lipschitz_margin_train(train, g, rule == "bounded-lipschitz");

  const std::vector<int> train_pred = c.predict_batch(train.points());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < train_pred.size(); ++i) correct += train_pred[i] == train.labels()[i];

  json report = {{"rule", rule},
                 {"n_train", train.size()},
                 {"n_test", test.rows()},
                 {"training_accuracy", static_cast<double>(correct) / static_cast<double>(train.size())}};
  if (c.kind != ClassifierKind::Parzen) {
    const MarginBound mb = margin_bound_check(train, c, g);
    report["margin"] = mb.margin;
    report["bound"] = mb.bound;
    report["bound_holds"] = mb.holds;
    if (!mb.holds) spdlog::error("margin {} exceeds the bound {}", mb.margin, mb.bound);
  }

  std::string predictions;
  for (int y : c.predict_batch(test)) predictions += (y > 0 ? "1\n" : "-1\n");
  emit(out, predictions);
  if (!report_path.empty()) {
    emit(report_path, report.dump(2) + "\n");
  } else if (!out.empty()) {
    std::cout << report.dump(2) << '\n';
  }
  return kOk;
}

int cmd_bench(const std::string& spec_path, const std::string& out_dir, unsigned threads, bool timing,
              std::optional<std::uint64_t> seed) {
  ExperimentSpec spec = spec_from_json(read_json_file(spec_path));
  if (seed) spec.seed = *seed;
  spdlog::info("running {}: {} sweep values x {} replications", spec.id, spec.sweep.values.size(), spec.replications);
  const ExperimentResult result = run(spec, RunOptions{threads, timing});
  std::filesystem::create_directories(out_dir);
  const std::string path = (std::filesystem::path(out_dir) / (spec.id + ".csv")).string();
  std::ofstream csv(path, std::ios::binary);
  if (!csv) throw DataError("cannot write " + path);
  write_csv(csv, result);
  std::cout << spec.id << " -> " << path << '\n';
  write_summary(std::cout, result);
  return kOk;
}

int cmd_oracle(const std::string& p_arg, const std::string& q_arg, const std::string& metric_name,
               const CostFlags& flags) {
  const MetricKind metric = metric_from_name(metric_name);
  const ProductDistribution p = distribution_from_json(load_json_arg(p_arg), "$.p");
  const ProductDistribution q = distribution_from_json(load_json_arg(q_arg), "$.q");
  const std::optional<double> v = population_value(p, q, metric, flags.for_metric(metric));
  if (!v) {
    throw DataError("no population oracle for " + to_string(p.kind()) + " vs " + to_string(q.kind()) + " under " +
                    metric_name);
  }
  json out = {{"metric", to_string(metric)}, {"value", *v}};
  std::cout << out.dump(2) << '\n';
  return kOk;
}

void configure_logging() {
  auto logger = spdlog::stderr_logger_st("ipmkit");
  logger->set_pattern("ipmkit: %l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("IPMKIT_LOG")) {
    const std::string level = env;
    if (level == "error") {
      spdlog::set_level(spdlog::level::err);
    } else if (level == "info") {
      spdlog::set_level(spdlog::level::info);
    } else if (level == "debug") {
      spdlog::set_level(spdlog::level::debug);
    } else {
      throw UsageError("IPMKIT_LOG must be error, info or debug");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integral probability metric estimation between two samples"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Seed for all randomness")->capture_default_str();

  std::string p_path, q_path, metric, out, witness_out;
  CostFlags cost;
  auto* est = app.add_subcommand("estimate", "Estimate a distance between two sample files");
  est->add_option("--p", p_path, "CSV sample from P")->required();
  est->add_option("--q", q_path, "CSV sample from Q")->required();
  est->add_option("--metric", metric, "wasserstein, dudley, mmd or tv")
      ->required()
      ->check(CLI::IsMember({"wasserstein", "dudley", "mmd", "tv"}));
  add_cost_flags(est, cost);
  est->add_option("--out", out, "Report JSON file (default stdout)");
  est->add_option("--witness-out", witness_out, "Write the witness JSON here");

  std::string witness_path, points_path;
  auto* weval = app.add_subcommand("witness-eval", "Evaluate a saved witness at CSV points");
  weval->add_option("--witness", witness_path, "Witness JSON")->required();
  weval->add_option("--points", points_path, "CSV points")->required();
  weval->add_option("--out", out, "Output file (default stdout)");

  std::string train_path, test_path, rule, report_path;
  auto* cls = app.add_subcommand("classify", "Train a classifier and label test points");
  cls->add_option("--train", train_path, "CSV with a trailing +1/-1 label column")->required();
  cls->add_option("--test", test_path, "CSV points to label")->required();
  cls->add_option("--rule", rule, "parzen, lipschitz or bounded-lipschitz")
      ->required()
      ->check(CLI::IsMember({"parzen", "lipschitz", "bounded-lipschitz"}));
  add_cost_flags(cls, cost);
  cls->add_option("--out", out, "Predictions CSV (default stdout)");
  cls->add_option("--report", report_path, "Training report JSON");

  std::string spec_path, out_dir = ".";
  unsigned threads = 1;
  bool timing = false;
  auto* bench = app.add_subcommand("bench", "Run an experiment spec and write {id}.csv");
  bench->add_option("--spec", spec_path, "Experiment spec JSON")->required();
  bench->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  bench->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_flag("--timing", timing, "Record wall_ms per estimate (output is then not reproducible)");

  std::string p_dist, q_dist;
  auto* orc = app.add_subcommand("oracle", "Population value for two distribution specs");
  orc->add_option("--p", p_dist, "Distribution JSON file or inline object")->required();
  orc->add_option("--q", q_dist, "Distribution JSON file or inline object")->required();
  orc->add_option("--metric", metric, "wasserstein, dudley, mmd or tv")
      ->required()
      ->check(CLI::IsMember({"wasserstein", "dudley", "mmd", "tv"}));
  add_cost_flags(orc, cost);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    configure_logging();
    if (*est) return cmd_estimate(p_path, q_path, metric, cost, out, witness_out);
    if (*weval) return cmd_witness_eval(witness_path, points_path, out);
    if (*cls) return cmd_classify(train_path, test_path, rule, cost, out, report_path);
    if (*bench) {
      return cmd_bench(spec_path, out_dir, threads, timing,
                       seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt);
    }
    if (*orc) return cmd_oracle(p_dist, q_dist, metric, cost);
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const SpecError& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const InfeasibleError& e) {
    spdlog::error("{}", e.what());
    return kInfeasible;
  } catch (const SolverError& e) {
    spdlog::error("{}", e.what());
    return kSolver;
  } catch (const DataError& e) {
    spdlog::error("{}", e.what());
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kData;
  }
  return kUsage;
}
