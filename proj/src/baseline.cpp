#include "aggsim/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aggsim/errors.hpp"

namespace aggsim {

std::size_t coverage_selections(std::size_t n, double epsilon) {
  if (n < 2) throw InvalidParams("coverage_selections: need n >= 2");
  if (epsilon <= 0.0 || epsilon >= 1.0)
    throw InvalidParams("coverage_selections: epsilon must lie in (0, 1)");
  const auto wanted =
      static_cast<std::size_t>(std::ceil((1.0 + epsilon) * std::log(double(n)))) + 1;
  return std::min(wanted, n - 1);  // cannot pick more distinct peers than exist
}

double coverage_lower_bound(std::size_t n, double epsilon) {
  return 1.0 - std::pow(double(n), -epsilon);
}

std::vector<BigInt> segment_data_from_draws(const BigInt& x, std::size_t k, const BigInt& p,
                                            std::span<const BigInt> draws) {
  if (k < 2) throw InvalidParams("segment_data: need k >= 2");
  if (p < 2) throw InvalidParams("segment_data: need p >= 2");
  if (draws.size() != k - 1) throw InvalidParams("segment_data: need k-1 draws");
  std::vector<BigInt> segments(draws.begin(), draws.end());
  BigInt partial = 0;
  for (const auto& s : segments) {
    if (s < 0 || s >= p) throw OutOfRange("segment_data: draw outside [0, p)");
    partial = (partial + s) % p;
  }
  BigInt last = (x % p - partial) % p;
  if (last < 0) last += p;
  segments.push_back(last);
  return segments;
}

std::vector<BigInt> segment_data(const BigInt& x, std::size_t k, const BigInt& p,
                                 RandomSource& rng) {
  if (k < 2) throw InvalidParams("segment_data: need k >= 2");
  std::vector<BigInt> draws;
  draws.reserve(k - 1);
  for (std::size_t j = 0; j + 1 < k; ++j) draws.push_back(rng.uniform_below(p));
  return segment_data_from_draws(x, k, p, draws);
}

std::vector<BigInt> segment_data_multiplicative(const BigInt& x, std::size_t k,
                                                const BigInt& p, RandomSource& rng) {
  if (k < 2) throw InvalidParams("segment_data: need k >= 2");
  if (p < 2) throw InvalidParams("segment_data: need p >= 2");
  if (x % p == 0)
    throw NotInvertible("segment_data_multiplicative: x must be invertible mod p");
  std::vector<BigInt> segments;
  segments.reserve(k);
  BigInt product = 1;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    BigInt s = 1 + rng.uniform_below(p - 1);  // unit mod prime p
    product = (product * s) % p;
    segments.push_back(std::move(s));
  }
  segments.push_back((x % p) * mod_inverse(product, p) % p);
  return segments;
}

SegmentedSumResult run_segmented_sum(const std::vector<BigInt>& inputs, double epsilon,
                                     const BigInt& p, RandomSource& rng, Channel& channel) {
  const std::size_t n = inputs.size();
  if (n < 3) throw InvalidParams("run_segmented_sum: need n >= 3");
  if (channel.num_parties() != n)
    throw InvalidParams("run_segmented_sum: channel party count does not match");

  const std::size_t selections = coverage_selections(n, epsilon);
  const std::size_t k = selections + 1;  // scattered segments plus the retained one
  constexpr std::uint32_t kSession = 1;

  std::vector<RandomSource> rngs;
  rngs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rngs.push_back(rng.fork(i + 1));

  // Scatter round: each party keeps the completing segment and sends the k-1
  // random ones to distinct peers over secure (non-eavesdroppable) links.
  std::vector<BigInt> retained(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto segments = segment_data(inputs[i], k, p, rngs[i]);
    retained[i] = segments.back();

    std::vector<std::uint32_t> peers(n);
    std::iota(peers.begin(), peers.end(), 1u);
    std::swap(peers[i], peers[n - 1]);  // exclude self
    for (std::size_t j = 0; j < selections; ++j) {
      const std::size_t pick = j + rngs[i].uniform_u64_below(n - 1 - j);
      std::swap(peers[j], peers[pick]);
      channel.post({MsgType::secure_segment, kSession, 0,
                    static_cast<std::uint32_t>(i + 1), peers[j], segments[j]});
    }
  }
  channel.flush_round();

  std::vector<BigInt> partial(n);
  std::vector<bool> covered(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    partial[i] = retained[i];
    for (const auto& msg : channel.drain_inbox(static_cast<std::uint32_t>(i + 1))) {
      if (msg.type != MsgType::secure_segment) continue;
      partial[i] = (partial[i] + msg.payload) % p;
      covered[i] = true;
    }
  }

  // Ring pass: each party adds its partial to the carry it received and
  // forwards; the last party announces the total.
  BigInt carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto self = static_cast<std::uint32_t>(i + 1);
    if (i > 0) {
      bool got = false;
      for (const auto& msg : channel.drain_inbox(self)) {
        if (msg.type == MsgType::secure_segment) {
          carry = msg.payload;
          got = true;
        }
      }
      if (!got) throw Error("run_segmented_sum: ring-pass message did not arrive");
    }
    carry = (carry + partial[i]) % p;
    if (i + 1 < n) {
      channel.post({MsgType::secure_segment, kSession, 0, self, self + 1, carry});
    } else {
      channel.post({MsgType::result_announce, kSession, 0, self, kBroadcast, carry});
    }
    channel.flush_round();
  }
  for (std::uint32_t j = 1; j + 1 <= n; ++j) channel.drain_inbox(j);

  SegmentedSumResult result;
  result.sum = carry;
  result.full_coverage = std::all_of(covered.begin(), covered.end(), [](bool c) { return c; });
  result.segments_per_party = k;
  return result;
}

double estimate_coverage_probability(std::size_t n, double epsilon, std::size_t trials,
                                     RandomSource& rng) {
  if (trials < 1) throw InvalidParams("estimate_coverage_probability: trials >= 1");
  const std::size_t selections = coverage_selections(n, epsilon);

  std::size_t covered_trials = 0;
  std::vector<std::uint32_t> peers(n);  // stays the identity between parties
  std::iota(peers.begin(), peers.end(), 0u);
  std::vector<std::pair<std::size_t, std::size_t>> undo;
  std::vector<bool> covered(n);
  for (std::size_t t = 0; t < trials; ++t) {
    RandomSource trial_rng = rng.fork(t);
    std::fill(covered.begin(), covered.end(), false);
    for (std::size_t i = 0; i < n; ++i) {
      // sample `selections` distinct peers != i via partial Fisher-Yates,
      // reverting the swaps afterwards so the array never needs a reset
      undo.clear();
      std::swap(peers[i], peers[n - 1]);
      undo.emplace_back(i, n - 1);
      for (std::size_t j = 0; j < selections; ++j) {
        const std::size_t pick = j + trial_rng.uniform_u64_below(n - 1 - j);
        std::swap(peers[j], peers[pick]);
        undo.emplace_back(j, pick);
        covered[peers[j]] = true;
      }
      for (auto it = undo.rbegin(); it != undo.rend(); ++it)
        std::swap(peers[it->first], peers[it->second]);
    }
    if (std::all_of(covered.begin(), covered.end(), [](bool c) { return c; }))
      ++covered_trials;
  }
  return double(covered_trials) / double(trials);
}

}  // namespace aggsim
