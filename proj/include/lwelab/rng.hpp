#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lwelab {

// Every stochastic operation in the toolkit is a pure function of its
// inputs and one of these.
struct RandomSeed {
  std::uint64_t value = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent child stream i of a master seed.
inline RandomSeed derive_seed(RandomSeed master, std::uint64_t index) {
  return {splitmix64(master.value + (index + 1) * 0x9e3779b97f4a7c15ULL)};
}

// Thin wrapper around mt19937_64. The bounded and unit draws are written
// out by hand because std::uniform_*_distribution output is not pinned by
// the standard; this way identical seeds give identical streams on every
// platform.
class Rng {
 public:
  explicit Rng(RandomSeed seed) : gen_(seed.value) {}

  std::uint64_t next() { return gen_(); }

  // Unbiased draw from [0, bound), bound >= 1.
  std::uint32_t below(std::uint32_t bound) {
    const std::uint64_t b = bound;
    const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % b + 1) % b;
    std::uint64_t r = gen_();
    while (r > limit) r = gen_();
    return static_cast<std::uint32_t>(r % b);
  }

  // [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller (sine branch discarded).
  double normal() {
    double u1 = unit();
    while (u1 == 0.0) u1 = unit();
    const double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace lwelab
