#include "aggsim/random_source.hpp"

#include "aggsim/errors.hpp"

namespace aggsim {

namespace {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RandomSource::RandomSource(const Seed& seed) {
  for (std::size_t w = 0; w < 4; ++w) {
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < 8; ++b) v |= std::uint64_t(seed[w * 8 + b]) << (8 * b);
    // pre-mix so that sparse seeds (e.g. small CLI integers) still key all words
    key_[w] = mix64(v + 0xa0761d6478bd642fULL * (w + 1));
  }
}

RandomSource RandomSource::from_u64(std::uint64_t seed) {
  Seed s{};
  std::uint64_t x = seed;
  for (std::size_t w = 0; w < 4; ++w) {
    x = mix64(x);
    for (std::size_t b = 0; b < 8; ++b) s[w * 8 + b] = std::uint8_t(x >> (8 * b));
  }
  return RandomSource(s);
}

std::uint64_t RandomSource::next_u64() {
  std::uint64_t x = counter_++;
  x = mix64(x + key_[0]);
  x = mix64(x ^ key_[1]);
  x = mix64(x + key_[2]);
  x = mix64(x ^ key_[3]);
  return x;
}

BigInt RandomSource::uniform_below(const BigInt& n) {
  if (n < 1) throw InvalidParams("uniform_below: n must be >= 1");
  if (n == 1) return 0;
  const std::size_t bits = bit_length(n - 1);
  const std::size_t words = (bits + 63) / 64;
  const std::size_t top_bits = bits - 64 * (words - 1);
  const std::uint64_t top_mask =
      top_bits == 64 ? ~0ULL : ((std::uint64_t(1) << top_bits) - 1);
  // rejection sampling over [0, 2^bits) keeps the draw uniform over [0, n)
  for (;;) {
    BigInt v = 0;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t word = next_u64();
      if (w == 0) word &= top_mask;
      v <<= 64;
      v |= word;
    }
    if (v < n) return v;
  }
}

BigInt RandomSource::uniform_bits(unsigned bits) {
  if (bits == 0) throw InvalidParams("uniform_bits: bits must be >= 1");
  if (bits == 1) return 1;
  BigInt low = uniform_below(BigInt(1) << (bits - 1));
  return (BigInt(1) << (bits - 1)) | low;
}

std::uint64_t RandomSource::uniform_u64_below(std::uint64_t n) {
  if (n == 0) throw InvalidParams("uniform_u64_below: n must be >= 1");
  if (n == 1) return 0;
  // reject above the largest multiple of n to stay uniform
  const std::uint64_t limit = ~0ULL - (~0ULL % n) - 1;
  for (;;) {
    std::uint64_t v = next_u64();
    if (v <= limit) return v % n;
  }
}

RandomSource RandomSource::fork(std::uint64_t label) const {
  RandomSource child(*this);
  // domain-separated rekeying; the child's counter restarts at zero
  std::uint64_t t = mix64(label ^ 0x464f524b5345454dULL);
  for (auto& w : child.key_) {
    w = mix64(w ^ t);
    t = mix64(t + 0x9e3779b97f4a7c15ULL);
  }
  child.counter_ = 0;
  return child;
}

}  // namespace aggsim
