#pragma once

#include "ipmkit/bench.hpp"
#include "ipmkit/classify.hpp"
#include "ipmkit/estimators.hpp"
#include "ipmkit/oracles.hpp"
#include "ipmkit/witness.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace ipmkit {

using nlohmann::json;

/// Malformed configuration JSON. The message starts with the offending path,
/// e.g. "$.p.lambda[2]: expected a number".
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {metric, value, n_points, warnings, iterations}
json to_json(const EstimateReport& report);

/// {variant, alpha, L, cap, anchors: [[coords..., coeff]...], kernel: {kind, param}, ground}
json to_json(const Witness& witness);
Witness witness_from_json(const json& j);

/// The discriminant's witness JSON plus {kind, margin}.
json to_json(const Classifier& classifier);

/// {kind: uniform|truncexp|gaussian|exp|discrete, d, ...parameters}. Per-kind
/// parameters: uniform a, b; truncexp lambda, c; gaussian mean, sigma; exp
/// lambda; discrete support, probs. Scalars are broadcast to all d
/// coordinates. Parameters may also sit in a nested "params" object.
ProductDistribution distribution_from_json(const json& j, const std::string& path = "$");

/// {id, p, q, metric, ground | kernel: {kind, param}, sweep: {kind:
/// sample_size|dimension, values, n}, replications, seed}
ExperimentSpec spec_from_json(const json& j);

/// Parses JSON text, reporting syntax errors as SpecError.
json parse_json(const std::string& text, const std::string& what);
json read_json_file(const std::string& path);

}  // namespace ipmkit
