#include "meandev/rng.hpp"

namespace meandev {

double Rng::uniform_open01() {
  constexpr double kScale = 0x1.0p-53;
  const std::uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * kScale;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 1));
}

}  // namespace meandev
