#ifndef AGGSIM_RANDOM_SOURCE_HPP
#define AGGSIM_RANDOM_SOURCE_HPP

#include <array>
#include <cstdint>

#include "aggsim/bigint.hpp"

namespace aggsim {

/// Deterministic counter-mode generator: a keyed mix of a 256-bit seed and a
/// 64-bit block counter. Identical seeds give identical streams on every
/// platform. Samples from Z_n are rejection-sampled, so they are uniform over
/// [0, n). Single-owner by convention: never share an instance between
/// parties or threads; derive independent child streams with fork().
class RandomSource {
 public:
  static constexpr std::size_t kSeedBytes = 32;
  using Seed = std::array<std::uint8_t, kSeedBytes>;

  explicit RandomSource(const Seed& seed);

  /// Convenience for CLI seeds: expands a 64-bit value into a full seed.
  static RandomSource from_u64(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform over [0, n); n >= 1.
  BigInt uniform_below(const BigInt& n);

  /// Uniform n-bit value with the top bit set; bits >= 1.
  BigInt uniform_bits(unsigned bits);

  /// Uniform over [0, n) for machine-word ranges; n >= 1.
  std::uint64_t uniform_u64_below(std::uint64_t n);

  /// Independent child stream. Distinct labels give distinct streams; the
  /// parent stream is not advanced.
  RandomSource fork(std::uint64_t label) const;

 private:
  std::array<std::uint64_t, 4> key_{};
  std::uint64_t counter_ = 0;
};

}  // namespace aggsim

#endif
