#pragma once

#include <cstdint>
#include <random>

namespace swingid {

// Derives independent child seeds from a master seed. splitmix64 is the usual
// choice for seed expansion; identical across platforms.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Thin wrapper around mt19937_64 that produces doubles with a fixed algorithm
// (std::uniform_real_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace swingid
