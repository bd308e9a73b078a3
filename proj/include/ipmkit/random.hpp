#pragma once

#include <cstdint>
#include <initializer_list>

namespace ipmkit {

/// Counter-based generator: the i-th draw of a stream is the SplitMix64
/// finaliser applied to key + (i + 1) * golden-gamma. Any draw can be computed
/// independently, so streams split across threads stay reproducible.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t bits(std::uint64_t counter) const;
  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t counter) const;
  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Folds a seed and a path of indices (trial, dimension, ...) into a stream key.
std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

}  // namespace ipmkit
