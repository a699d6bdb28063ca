#include <doctest.h>

#include <cmath>

#include "aggsim/baseline.hpp"
#include "aggsim/errors.hpp"

using namespace aggsim;

TEST_CASE("selection count follows the coverage rule") {
  // ceil(1.5 * ln 100) + 1 = 8
  CHECK(coverage_selections(100, 0.5) == 8);
  // never more recipients than other parties exist
  CHECK(coverage_selections(3, 0.9) == 2);
  CHECK_THROWS_AS(coverage_selections(1, 0.5), InvalidParams);
  CHECK_THROWS_AS(coverage_selections(10, 0.0), InvalidParams);
  CHECK_THROWS_AS(coverage_selections(10, 1.0), InvalidParams);
}

TEST_CASE("segmentation from pinned draws") {
  // x=7, k=3, p=23, draws (5,9): last segment = 7 - 14 mod 23 = 16
  const std::vector<BigInt> draws = {5, 9};
  const auto segments = segment_data_from_draws(7, 3, 23, draws);
  REQUIRE(segments.size() == 3);
  CHECK(segments[0] == 5);
  CHECK(segments[1] == 9);
  CHECK(segments[2] == 16);

  // k=2 with a zero draw degenerates to (0, x)
  const std::vector<BigInt> zero = {0};
  const auto pair = segment_data_from_draws(11, 2, 23, zero);
  CHECK(pair == std::vector<BigInt>{0, 11});

  CHECK_THROWS_AS(segment_data_from_draws(7, 1, 23, {}), InvalidParams);
  CHECK_THROWS_AS(segment_data_from_draws(7, 3, 23, std::vector<BigInt>{1}),
                  InvalidParams);
}

TEST_CASE("random segmentation always reassembles mod p") {
  RandomSource rng = RandomSource::from_u64(505);
  for (int i = 0; i < 200; ++i) {
    const BigInt p = 23;
    const BigInt x = rng.uniform_below(p);
    const std::size_t k = 2 + rng.uniform_u64_below(6);
    const auto segments = segment_data(x, k, p, rng);
    REQUIRE(segments.size() == k);
    BigInt sum = 0;
    for (const auto& s : segments) {
      CHECK(s >= 0);
      CHECK(s < p);
      sum = (sum + s) % p;
    }
    CHECK(sum == x);
  }
}

TEST_CASE("rng segmentation is the pinned core over the stream's draws") {
  RandomSource rng = RandomSource::from_u64(42);
  RandomSource replay = RandomSource::from_u64(42);
  std::vector<BigInt> draws;
  for (int i = 0; i < 3; ++i) draws.push_back(replay.uniform_below(BigInt(23)));
  CHECK(segment_data(9, 4, 23, rng) == segment_data_from_draws(9, 4, 23, draws));
}

TEST_CASE("multiplicative segmentation reassembles under products") {
  RandomSource rng = RandomSource::from_u64(9);
  const BigInt p = 23;
  for (int i = 0; i < 100; ++i) {
    const BigInt x = 1 + rng.uniform_below(p - 1);
    const auto segments = segment_data_multiplicative(x, 4, p, rng);
    BigInt prod = 1;
    for (const auto& s : segments) prod = (prod * s) % p;
    CHECK(prod == x);
  }
  CHECK_THROWS_AS(segment_data_multiplicative(0, 3, p, rng), NotInvertible);
}

TEST_CASE("segmented sum run: x=(3,5,7) totals 15 for any seed") {
  for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
    Channel ch(3);
    RandomSource rng = RandomSource::from_u64(seed);
    const auto result = run_segmented_sum({3, 5, 7}, 0.5, 23, rng, ch);
    CHECK(result.sum == 15);
    // n=3 clamps to full redistribution, so coverage is structural
    CHECK(result.full_coverage);
    CHECK(result.segments_per_party == 3);

    // only the final announce is visible to the eavesdropper
    REQUIRE(ch.transcript().entries().size() == 1);
    CHECK(ch.transcript().entries()[0].message.type == MsgType::result_announce);
    CHECK(ch.transcript().entries()[0].message.payload == 15);

    // per-party message count is exactly k (segments plus one ring pass)
    for (const auto& [id, counters] : ch.transcript().parties())
      CHECK(counters.msgs_sent == result.segments_per_party);
  }
}

TEST_CASE("segmented sum respects the modulus") {
  Channel ch(4);
  RandomSource rng = RandomSource::from_u64(31);
  const auto result = run_segmented_sum({20, 21, 22, 1}, 0.3, 23, rng, ch);
  CHECK(result.sum == (20 + 21 + 22 + 1) % 23);
}

TEST_CASE("coverage estimate edge cases") {
  RandomSource rng = RandomSource::from_u64(10);
  // complete redistribution covers everyone in every trial
  CHECK(estimate_coverage_probability(3, 0.9, 200, rng) == 1.0);
  const double single = estimate_coverage_probability(10, 0.3, 1, rng);
  CHECK((single == 0.0 || single == 1.0));
  CHECK_THROWS_AS(estimate_coverage_probability(10, 0.3, 0, rng), InvalidParams);
}

TEST_CASE("coverage estimate clears the analytic floor") {
  RandomSource rng = RandomSource::from_u64(77);
  const std::size_t trials = 2000;
  for (std::size_t n : {10u, 50u}) {
    for (double eps : {0.3, 0.5}) {
      const double estimate = estimate_coverage_probability(n, eps, trials, rng);
      const double se = std::sqrt(std::max(estimate * (1 - estimate), 1e-6) / trials);
      CHECK(estimate >= coverage_lower_bound(n, eps) - 3 * se);
    }
  }
}
