// Seeded random streams with platform-independent transforms.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace hwmon {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

enum class Stream : std::uint64_t { Deployment = 1, Traffic = 2, Readings = 3, Protocol = 4 };

// std::uniform_real_distribution and friends are implementation-defined, so the
// transforms are spelled out here to keep runs identical across toolchains.
class Rng {
 public:
  Rng() : Rng(0, Stream::Deployment) {}
  Rng(std::uint64_t seed, Stream s) : gen_(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(s)))) {}

  std::uint64_t next() { return gen_(); }
  /// [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal(double mean, double sd) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  double exponential(double rate) { return -std::log(1.0 - uniform()) / rate; }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace hwmon
