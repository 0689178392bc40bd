#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace qcmce {

/// Derives an independent 64-bit seed for a named stream, e.g. ("stern", row).
/// Stable across platforms and standard libraries.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index = 0);

/// Seeded generator with portable bounded sampling. std::uniform_int_distribution
/// is implementation-defined, so bounded draws are done here by rejection.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, std::string_view label, std::uint64_t index = 0)
      : engine_(derive_seed(master, label, index)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t uniform(std::uint64_t bound);

  bool coin() { return (engine_() >> 63) != 0; }

  /// Sorted list of `count` distinct values in [0, range) (Floyd's algorithm).
  std::vector<std::size_t> sample_subset(std::size_t range, std::size_t count);

  /// Uniformly random permutation of 0..n-1.
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace qcmce
