#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace oplab {

// Mixes a 64-bit value with the SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

// A reproducible random stream identified by (seed, stream index).
//
// The engine is std::mt19937_64 seeded with a key derived from the pair:
//
//   key = splitmix64(seed ^ splitmix64(stream + 0x9e3779b97f4a7c15))
//
// Child streams are obtained with derive(i), which returns the stream
// (key, i). Deriving is counter-based: the child for index i does not depend
// on how many draws were taken from the parent or on any other child, so
// work items that own a derived stream produce the same draws regardless of
// scheduling.
//
// Continuous draws are built from raw engine bits rather than the standard
// distributions, whose outputs are implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t key() const { return key_; }

  RngStream derive(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Unbiased integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);
  // Standard exponential.
  double exponential();
  // Standard normal (Box-Muller, one value per call).
  double normal();
  // Index drawn with probability proportional to weights. Weights must be
  // nonnegative with a positive sum.
  int categorical(std::span<const double> weights);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace oplab
