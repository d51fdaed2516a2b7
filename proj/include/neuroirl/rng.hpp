#pragma once

#include <cstdint>
#include <random>

namespace neuroirl {

// SplitMix64 finalizer, used to derive independent seed streams from one
// base seed. Every consumer of randomness gets its own stream tag so that
// adding a consumer never shifts the draws of another.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a) {
  return splitmix64(seed ^ splitmix64(a));
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix_seed(mix_seed(seed, a), b);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) {
  return mix_seed(mix_seed(seed, a, b), c);
}

// Stream tags. Values are arbitrary but must stay fixed: they are part of
// the reproducibility contract (same seed, same results).
namespace stream {
inline constexpr std::uint64_t kPopulationInit = 0x01;
inline constexpr std::uint64_t kReproduction = 0x02;
inline constexpr std::uint64_t kDemoSampling = 0x03;
inline constexpr std::uint64_t kRewardSampler = 0x04;
inline constexpr std::uint64_t kWorldGen = 0x05;
inline constexpr std::uint64_t kEvolutionSeed = 0x06;
inline constexpr std::uint64_t kSamplerSeed = 0x07;
}  // namespace stream

// Small wrapper around mt19937_64 so call sites stay terse.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  // Uniform integer in [0, n).
  int uniform_int(int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(engine_);
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }

  double normal(double mean, double sigma) {
    return std::normal_distribution<double>(mean, sigma)(engine_);
  }

  bool flip(double p) { return uniform() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace neuroirl
