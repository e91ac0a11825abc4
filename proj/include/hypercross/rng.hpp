#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace hypercross {

/// Philox4x32-10 counter-based generator.
///
/// A generator is identified by a 64-bit key (the seed) and a 64-bit stream
/// id; the draw index is the low half of the 128-bit counter. Two generators
/// with different (seed, stream) pairs are statistically independent, so a
/// replication's generator is a pure function of (master seed, replication
/// index) and results do not depend on thread scheduling.
///
/// All continuous and discrete variates are produced by code in this file
/// rather than by <random> distributions, whose algorithms are
/// implementation-defined.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed = 0, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Uniform on [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Standard normal (Box-Muller, second value cached).
  double normal();
  /// Poisson variate: inversion below mean 10, PTRS (Hoermann 1993) above.
  std::uint64_t poisson(double mean);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// The raw bijection: ten rounds of Philox on one counter block.
  static Block block(Block counter, Key key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

using Rng = Philox4x32;

/// Mixes a tag into a seed (splitmix64 finalizer). Used to derive independent
/// sub-seeds for sub-experiments and retries.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace hypercross
