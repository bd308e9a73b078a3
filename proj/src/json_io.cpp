#include "ipmkit/json_io.hpp"

#include <fstream>
#include <sstream>

namespace ipmkit {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw SpecError(path + ": " + msg); }

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Eigen::VectorXd numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

// A per-dimension parameter given as a scalar (broadcast) or an array.
Eigen::VectorXd param(const json& obj, const std::string& key, Eigen::Index& d, const std::string& path) {
  const json& j = field(obj, key, path);
  const std::string here = path + "." + key;
  if (j.is_number()) {
    if (d < 1) fail(path + ".d", "required when parameters are scalars");
    return Eigen::VectorXd::Constant(d, number(j, here));
  }
  Eigen::VectorXd v = numbers(j, here);
  if (d < 1) d = v.size();
  if (v.size() != d) fail(here, "expected " + std::to_string(d) + " entries, got " + std::to_string(v.size()));
  return v;
}

json kernel_json(const Kernel& k) {
  if (k.kind() == Kernel::Kind::Custom) throw DataError("custom kernels cannot be serialised");
  return {{"kind", k.name()}, {"param", k.param()}};
}

Kernel kernel_from_json(const json& j, const std::string& path) {
  const std::string kind = text(field(j, "kind", path), path + ".kind");
  const double p = number(field(j, "param", path), path + ".param");
  try {
    return Kernel::from_name(kind, p);
  } catch (const DataError& e) {
    fail(path, e.what());
  }
}

GroundMetric ground_from_json(const json& j, const std::string& path) {
  try {
    return GroundMetric::from_name(text(j, path));
  } catch (const DataError& e) {
    fail(path, e.what());
  }
}

std::string variant_name(Witness::Variant v) {
  switch (v) {
    case Witness::Variant::LipschitzExt:
      return "lipschitz";
    case Witness::Variant::BoundedLipschitzExt:
      return "bounded_lipschitz";
    case Witness::Variant::RkhsExpansion:
      return "rkhs";
  }
  return "unknown";
}

}  // namespace

json to_json(const EstimateReport& report) {
  return {{"metric", to_string(report.metric)},
          {"value", report.value},
          {"n_points", report.n_points},
          {"warnings", report.warnings},
          {"iterations", report.iterations}};
}

json to_json(const Witness& w) {
  json anchors = json::array();
  for (Eigen::Index i = 0; i < w.anchors().rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < w.dim(); ++k) row.push_back(w.anchors()(i, k));
    row.push_back(w.coefficients()(i));
    anchors.push_back(std::move(row));
  }
  json out = {{"variant", variant_name(w.variant())}, {"alpha", w.alpha()}, {"anchors", std::move(anchors)}};
  out["L"] = w.variant() == Witness::Variant::RkhsExpansion ? json(nullptr) : json(w.lipschitz());
  out["cap"] = w.variant() == Witness::Variant::BoundedLipschitzExt ? json(w.cap()) : json(nullptr);
  out["kernel"] = w.kernel() ? kernel_json(*w.kernel()) : json(nullptr);
  if (w.ground()) {
    if (w.ground()->kind() == GroundMetric::Kind::Custom) throw DataError("custom metrics cannot be serialised");
    out["ground"] = w.ground()->name();
  } else {
    out["ground"] = nullptr;
  }
  return out;
}

Witness witness_from_json(const json& j) {
  const std::string path = "$";
  const std::string variant = text(field(j, "variant", path), "$.variant");
  const json& rows = field(j, "anchors", path);
  if (!rows.is_array() || rows.empty()) fail("$.anchors", "expected a non-empty array");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::Index d = -1;
  PointMatrix anchors;
  Eigen::VectorXd coeffs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string here = "$.anchors[" + std::to_string(i) + "]";
    const Eigen::VectorXd row = numbers(rows[static_cast<std::size_t>(i)], here);
    if (row.size() < 2) fail(here, "expected coordinates followed by a coefficient");
    if (d < 0) {
      d = row.size() - 1;
      anchors.resize(n, d);
    } else if (row.size() - 1 != d) {
      fail(here, "dimension differs from the first anchor");
    }
    anchors.row(i) = row.head(d).transpose();
    coeffs(i) = row(d);
  }
  try {
    if (variant == "rkhs") {
      return rkhs_expansion(std::move(anchors), std::move(coeffs), kernel_from_json(field(j, "kernel", path), "$.kernel"));
    }
    const double alpha = number(field(j, "alpha", path), "$.alpha");
    const double L = number(field(j, "L", path), "$.L");
    const GroundMetric g = ground_from_json(field(j, "ground", path), "$.ground");
    if (variant == "lipschitz") return lipschitz_extension(std::move(anchors), std::move(coeffs), L, alpha, g);
    if (variant == "bounded_lipschitz") {
      const double cap = number(field(j, "cap", path), "$.cap");
      return bounded_lipschitz_extension(std::move(anchors), std::move(coeffs), L, cap, alpha, g);
    }
  } catch (const DataError& e) {
    fail("$", e.what());
  }
  fail("$.variant", "expected lipschitz, bounded_lipschitz or rkhs");
}

json to_json(const Classifier& c) {
  json out = to_json(c.discriminant);
  out["kind"] = to_string(c.kind);
  out["margin"] = c.margin;
  return out;
}

ProductDistribution distribution_from_json(const json& j, const std::string& path) {
  const std::string kind = text(field(j, "kind", path), path + ".kind");
  Eigen::Index d = 0;
  if (j.contains("d")) {
    d = integer(j["d"], path + ".d");
    if (d < 1) fail(path + ".d", "must be >= 1");
  }
  const bool nested = j.contains("params");
  const json& params = nested ? j["params"] : j;
  const std::string ppath = nested ? path + ".params" : path;
  try {
    if (kind == "uniform") {
      Eigen::VectorXd a = param(params, "a", d, ppath);
      Eigen::VectorXd b = param(params, "b", d, ppath);
      return ProductDistribution::uniform(std::move(a), std::move(b));
    }
    if (kind == "truncexp") {
      Eigen::VectorXd lambda = param(params, "lambda", d, ppath);
      Eigen::VectorXd c = param(params, "c", d, ppath);
      return ProductDistribution::trunc_exp(std::move(lambda), std::move(c));
    }
    if (kind == "gaussian") {
      Eigen::VectorXd mean = param(params, "mean", d, ppath);
      Eigen::VectorXd sigma = param(params, "sigma", d, ppath);
      return ProductDistribution::gaussian(std::move(mean), std::move(sigma));
    }
    if (kind == "exp") return ProductDistribution::exponential(param(params, "lambda", d, ppath));
    if (kind == "discrete") {
      const json& sup = field(params, "support", ppath);
      const std::string spath = ppath + ".support";
      if (!sup.is_array() || sup.empty()) fail(spath, "expected a non-empty array");
      const auto k = static_cast<Eigen::Index>(sup.size());
      const Eigen::Index dim = sup[0].is_array() ? static_cast<Eigen::Index>(sup[0].size()) : 1;
      if (d > 0 && dim != d) fail(spath, "support points have dimension " + std::to_string(dim));
      PointMatrix support(k, dim);
      for (Eigen::Index i = 0; i < k; ++i) {
        const std::string here = spath + "[" + std::to_string(i) + "]";
        const json& pt = sup[static_cast<std::size_t>(i)];
        if (pt.is_number()) {
          if (dim != 1) fail(here, "expected an array of " + std::to_string(dim) + " numbers");
          support(i, 0) = number(pt, here);
        } else {
          const Eigen::VectorXd v = numbers(pt, here);
          if (v.size() != dim) fail(here, "expected " + std::to_string(dim) + " coordinates");
          support.row(i) = v.transpose();
        }
      }
      return ProductDistribution::discrete(std::move(support), numbers(field(params, "probs", ppath), ppath + ".probs"));
    }
  } catch (const DataError& e) {
    fail(path, e.what());
  }
  fail(path + ".kind", "unknown distribution kind '" + kind + "'");
}

ExperimentSpec spec_from_json(const json& j) {
  if (!j.is_object()) fail("$", "expected an object");
  const std::string id = text(field(j, "id", "$"), "$.id");
  ProductDistribution p = distribution_from_json(field(j, "p", "$"), "$.p");
  ProductDistribution q = distribution_from_json(field(j, "q", "$"), "$.q");
  MetricKind metric;
  try {
    metric = metric_from_name(text(field(j, "metric", "$"), "$.metric"));
  } catch (const DataError& e) {
    fail("$.metric", e.what());
  }

  std::optional<CostSpec> cost;
  if (j.contains("kernel")) {
    cost = kernel_from_json(j["kernel"], "$.kernel");
  } else if (j.contains("ground")) {
    cost = ground_from_json(j["ground"], "$.ground");
  } else if (metric == MetricKind::MMD) {
    fail("$.kernel", "missing (mmd needs a kernel)");
  } else {
    cost = GroundMetric::l1();
  }
  if (metric == MetricKind::MMD && !std::holds_alternative<Kernel>(*cost)) fail("$.kernel", "mmd needs a kernel");
  if ((metric == MetricKind::Wasserstein || metric == MetricKind::Dudley) &&
      !std::holds_alternative<GroundMetric>(*cost)) {
    fail("$.ground", to_string(metric) + " needs a ground metric");
  }

  Sweep sweep;
  sweep.values = kDefaultSampleSizes;
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    const std::string kind = text(field(s, "kind", "$.sweep"), "$.sweep.kind");
    if (kind == "dimension") {
      sweep.kind = Sweep::Kind::Dimension;
      sweep.fixed_n = integer(field(s, "n", "$.sweep"), "$.sweep.n");
      sweep.values.clear();
    } else if (kind != "sample_size") {
      fail("$.sweep.kind", "expected sample_size or dimension");
    }
    if (s.contains("values")) {
      const json& vals = s["values"];
      if (!vals.is_array() || vals.empty()) fail("$.sweep.values", "expected a non-empty array of integers");
      sweep.values.clear();
      for (std::size_t i = 0; i < vals.size(); ++i) {
        sweep.values.push_back(integer(vals[i], "$.sweep.values[" + std::to_string(i) + "]"));
      }
    } else if (sweep.kind == Sweep::Kind::Dimension) {
      fail("$.sweep.values", "missing");
    }
  }

  int replications = 20;
  if (j.contains("replications")) replications = static_cast<int>(integer(j["replications"], "$.replications"));
  std::uint64_t seed = 0;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("$.seed", "expected a non-negative integer");
    seed = j["seed"].get<std::uint64_t>();
  }

  ExperimentSpec spec{id, std::move(p), std::move(q), metric, std::move(*cost), std::move(sweep), replications, seed};
  try {
    validate(spec);
  } catch (const DataError& e) {
    fail("$", e.what());
  }
  return spec;
}

json parse_json(const std::string& text_in, const std::string& what) {
  try {
    return json::parse(text_in);
  } catch (const json::parse_error& e) {
    throw SpecError(what + ": invalid JSON: " + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path);
}

}  // namespace ipmkit
