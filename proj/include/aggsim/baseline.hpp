#ifndef AGGSIM_BASELINE_HPP
#define AGGSIM_BASELINE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "aggsim/bigint.hpp"
#include "aggsim/netsim.hpp"
#include "aggsim/random_source.hpp"

namespace aggsim {

/// Randomized secure sum with segmentation under SECURE channels: each party
/// splits its value into k segments, scatters k-1 of them to random distinct
/// peers, and the per-party partial sums are accumulated around the ring.
/// Comparison baseline for the blinding protocols, and a Monte Carlo checker
/// of the coverage bound.

/// Segments a party must redistribute so that, with probability at least
/// 1 - n^-epsilon, every party receives a foreign segment:
/// ceil((1+epsilon)*ln n) + 1, clamped to n-1 (one cannot pick more distinct
/// recipients than there are other parties).
std::size_t coverage_selections(std::size_t n, double epsilon);

/// 1 - n^-epsilon, the coverage probability floor.
double coverage_lower_bound(std::size_t n, double epsilon);

/// Deterministic core: the first k-1 segments are the given draws, the last
/// one completes the sum to x mod p. Requires k >= 2 and draws.size() == k-1.
std::vector<BigInt> segment_data_from_draws(const BigInt& x, std::size_t k, const BigInt& p,
                                            std::span<const BigInt> draws);

/// Additive split: k-1 segments uniform in Z_p, last segment makes the total
/// x mod p.
std::vector<BigInt> segment_data(const BigInt& x, std::size_t k, const BigInt& p,
                                 RandomSource& rng);

/// Multiplicative variant: k-1 segments uniform in [1, p), last segment is
/// x times the inverse of their product, so the product of all k is x mod p.
/// Requires gcd(x, p) = 1.
std::vector<BigInt> segment_data_multiplicative(const BigInt& x, std::size_t k,
                                                const BigInt& p, RandomSource& rng);

struct SegmentedSumResult {
  BigInt sum;                       // sum of all inputs mod p
  bool full_coverage = false;       // every party got >= 1 foreign segment
  std::size_t segments_per_party = 0;  // k
};

/// Full baseline run over the channel: segment, scatter over secure links,
/// accumulate partial sums around the ring, announce. Requires n >= 3.
/// The channel must have inputs.size() parties.
SegmentedSumResult run_segmented_sum(const std::vector<BigInt>& inputs, double epsilon,
                                     const BigInt& p, RandomSource& rng, Channel& channel);

/// Monte Carlo estimate of P[every party receives >= 1 foreign segment] under
/// the coverage_selections redistribution rule. Pure combinatorics, no
/// channel. trials >= 1.
double estimate_coverage_probability(std::size_t n, double epsilon, std::size_t trials,
                                     RandomSource& rng);

}  // namespace aggsim

#endif
