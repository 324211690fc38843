#pragma once

#include <array>
#include <cstdint>

namespace streamtree {

// SplitMix64 step; used for seeding and for deriving child streams.
std::uint64_t SplitMix64(std::uint64_t& state);

// Mixes two words into one well-distributed seed.
std::uint64_t MixSeed(std::uint64_t a, std::uint64_t b);

// xoshiro256** 1.0 seeded through SplitMix64. All variate generators below are
// implemented here rather than through <random> distributions, whose output
// is implementation-defined, so sequences are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t NextU64();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer on [0, n). n must be > 0.
  std::uint64_t UniformInt(std::uint64_t n);
  // Standard normal via the Marsaglia polar method.
  double Normal();
  bool Bernoulli(double p) { return Uniform() < p; }

  // Poisson(lambda). Knuth multiplication for lambda <= 10, Hormann's PTRS
  // transformed rejection above. lambda == 0 always yields 0.
  std::uint64_t Poisson(double lambda);

  bool operator==(const Rng&) const = default;

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace streamtree
