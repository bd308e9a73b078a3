#include "ipmkit/bench.hpp"

#include "ipmkit/random.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace ipmkit {

namespace {

Eigen::Index size_cap(MetricKind metric) {
  return metric == MetricKind::Wasserstein || metric == MetricKind::Dudley ? 2000 : 20000;
}

void check_total(Eigen::Index n, MetricKind metric) {
  if (n < 2 || n % 2 != 0) {
    throw DataError("sample size N=" + std::to_string(n) + " must be even and >= 2 (m = n = N/2)");
  }
  if (n > size_cap(metric)) {
    throw DataError("sample size N=" + std::to_string(n) + " exceeds the cap of " +
                    std::to_string(size_cap(metric)) + " for " + to_string(metric));
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void validate(const ExperimentSpec& spec) {
  if (spec.id.empty()) throw DataError("experiment id must not be empty");
  if (spec.replications < 1) throw DataError("replications must be >= 1");
  if (spec.sweep.values.empty()) throw DataError("sweep needs at least one value");
  if (spec.sweep.kind == Sweep::Kind::SampleSize) {
    if (spec.p.dim() != spec.q.dim()) throw DataError("p and q differ in dimension");
    for (auto n : spec.sweep.values) check_total(n, spec.metric);
  } else {
    check_total(spec.sweep.fixed_n, spec.metric);
    for (auto d : spec.sweep.values) {
      if (d < 1) throw DataError("dimensions must be >= 1");
    }
    spec.p.resized(1);
    spec.q.resized(1);
  }
}

ExperimentResult run(const ExperimentSpec& spec, const RunOptions& options) {
  validate(spec);
  const auto reps = static_cast<std::size_t>(spec.replications);
  const std::size_t total = spec.sweep.values.size() * reps;

  struct Setting {
    ProductDistribution p;
    ProductDistribution q;
    Eigen::Index n;
    std::optional<double> population;
  };
  std::vector<Setting> settings;
  for (auto v : spec.sweep.values) {
    if (spec.sweep.kind == Sweep::Kind::SampleSize) {
      settings.push_back({spec.p, spec.q, v, std::nullopt});
    } else {
      settings.push_back({spec.p.resized(v), spec.q.resized(v), spec.sweep.fixed_n, std::nullopt});
    }
    settings.back().population = population_value(settings.back().p, settings.back().q, spec.metric, spec.cost);
  }

  ExperimentResult result;
  result.id = spec.id;
  result.sweep_name = spec.sweep.name();
  result.rows.resize(total);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) return;
      const std::size_t s = task / reps;
      const std::size_t rep = task % reps;
      try {
        const Setting& st = settings[s];
        const auto value = static_cast<std::uint64_t>(spec.sweep.values[s]);
        const Eigen::Index half = st.n / 2;
        const auto start = std::chrono::steady_clock::now();
        const SampleSet sp = sample(st.p, half, derive_key(spec.seed, {value, rep, 0}), Label::P);
        const SampleSet sq = sample(st.q, half, derive_key(spec.seed, {value, rep, 1}), Label::Q);
        const EstimateReport r = estimate(pool(sp, sq), spec.metric, spec.cost);
        const auto stop = std::chrono::steady_clock::now();
        ExperimentRow& row = result.rows[task];
        row.sweep_value = spec.sweep.values[s];
        row.replication = static_cast<int>(rep);
        row.estimate = r.value;
        row.population = st.population;
        if (options.timing) row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(total)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool_threads;
    for (unsigned t = 0; t < threads; ++t) pool_threads.emplace_back(worker);
    for (auto& t : pool_threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

std::vector<SummaryRow> summarize(const ExperimentResult& result) {
  if (result.rows.empty()) throw DataError("cannot summarise an empty result");
  std::vector<SummaryRow> out;
  std::size_t i = 0;
  while (i < result.rows.size()) {
    std::size_t j = i;
    while (j < result.rows.size() && result.rows[j].sweep_value == result.rows[i].sweep_value) ++j;
    const auto count = static_cast<double>(j - i);
    SummaryRow row;
    row.sweep_value = result.rows[i].sweep_value;
    row.population = result.rows[i].population;
    double sum = 0.0;
    for (std::size_t k = i; k < j; ++k) sum += result.rows[k].estimate;
    row.mean = sum / count;
    double sq = 0.0;
    for (std::size_t k = i; k < j; ++k) sq += (result.rows[k].estimate - row.mean) * (result.rows[k].estimate - row.mean);
    row.stddev = j - i > 1 ? std::sqrt(sq / (count - 1.0)) : 0.0;
    if (row.population) {
      row.abs_error = std::abs(row.mean - *row.population);
      double err = 0.0;
      for (std::size_t k = i; k < j; ++k) err += std::abs(result.rows[k].estimate - *row.population);
      row.mean_abs_error = err / count;
    }
    out.push_back(row);
    i = j;
  }
  return out;
}

void write_csv(std::ostream& out, const ExperimentResult& result) {
  out << "sweep_name,sweep_value,replication,estimate,population,abs_error,wall_ms\n";
  for (const auto& row : result.rows) {
    out << result.sweep_name << ',' << row.sweep_value << ',' << row.replication << ','
        << format_double(row.estimate) << ',';
    if (row.population) {
      out << format_double(*row.population) << ',' << format_double(std::abs(row.estimate - *row.population));
    } else {
      out << ',';
    }
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", row.wall_ms);
    out << ',' << ms << '\n';
  }
}

void write_summary(std::ostream& out, const ExperimentResult& result) {
  char line[160];
  std::snprintf(line, sizeof line, "%8s %12s %12s %12s %12s %12s\n", result.sweep_name.c_str(), "mean", "std",
                "population", "|mean-pop|", "mean|err|");
  out << line;
  for (const auto& s : summarize(result)) {
    auto opt = [](const std::optional<double>& v) {
      char buf[32];
      if (v) {
        std::snprintf(buf, sizeof buf, "%12.6f", *v);
      } else {
        std::snprintf(buf, sizeof buf, "%12s", "-");
      }
      return std::string(buf);
    };
    std::snprintf(line, sizeof line, "%8ld %12.6f %12.6f %s %s %s\n", static_cast<long>(s.sweep_value), s.mean,
                  s.stddev, opt(s.population).c_str(), opt(s.abs_error).c_str(), opt(s.mean_abs_error).c_str());
    out << line;
  }
}

}  // namespace ipmkit
