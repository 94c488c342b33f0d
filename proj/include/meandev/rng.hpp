#pragma once

#include <cstdint>
#include <random>

namespace meandev {

// Uniform source for all sampling: std::mt19937_64 (MT19937-64, the
// standard-specified 64-bit Mersenne Twister) seeded with a single 64-bit
// value. Uniforms are formed from the top 53 bits as (k + 0.5) / 2^53, which
// lies strictly inside (0,1) and does not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform_open01();
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the index-th independent stream derived from a master seed:
/// splitmix64(master ^ splitmix64(index + 1)). Streams depend only on
/// (master, index), never on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace meandev
