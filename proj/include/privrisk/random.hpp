#pragma once

// Seeded draws with fully specified algorithms; the standard distributions are
// implementation-defined and would break byte-identical outputs across
// toolchains.

#include <cstdint>
#include <random>
#include <span>

namespace privrisk {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Index drawn with probability proportional to `weights`.
  std::size_t categorical(std::span<const double> weights);
  bool bernoulli(double p) { return uniform() < p; }

private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; derives independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace privrisk
