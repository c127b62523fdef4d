#pragma once

#include <cstdint>
#include <random>

#include "tpreg/numerics.hpp"

namespace tpreg {

// Deterministic RNG used everywhere. Uniforms come straight from the 53 most
// significant bits of mt19937_64 and normals go through the inverse CDF, so a
// given seed reproduces the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform on the open interval (0,1); never returns an exact endpoint
  double uniform() {
    return (double(gen_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() { return num::norm_quantile(uniform()); }

  double normal(double mean, double sd) { return mean + sd * normal(); }

 private:
  std::mt19937_64 gen_;
};

// Counter-based seed derivation, so that replication k of a study gets an
// independent stream from the master seed.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace tpreg
