#include <doctest.h>

#include <map>

#include "aggsim/errors.hpp"
#include "aggsim/product_protocol.hpp"

using namespace aggsim;

namespace {

SetupState state_with_blinding(const GroupParams& gp, std::uint32_t index,
                               const BigInt& blinding) {
  SetupState st;
  st.phase = Phase::product;
  st.position = {index, index == 1 ? 3u : index - 1, index == 3 ? 1u : index + 1};
  st.base_prime = gp.p;
  st.modulus = gp.p;
  st.subgroup_order = gp.q;
  st.secret_exponent = 0;
  st.public_share = 1;
  st.blinding = blinding;
  return st;
}

}  // namespace

TEST_CASE("product encrypt/combine on the pinned reference instance") {
  const GroupParams gp = make_group_from_q(11);
  // blindings from the ring test vector r=(3,5,7)
  const std::vector<BigInt> blinding = {9, 6, 3};
  const std::vector<BigInt> x = {2, 3, 4};

  std::vector<ProductCiphertext> cts;
  for (std::uint32_t i = 0; i < 3; ++i) {
    const auto st = state_with_blinding(gp, i + 1, blinding[i]);
    cts.push_back(product_encrypt(st, x[i]));
  }
  CHECK(cts[0].value == 18);  // 2*9 mod 23
  CHECK(cts[1].value == 18);  // 3*6 mod 23
  CHECK(cts[2].value == 12);  // 4*3 mod 23

  const std::vector<std::uint32_t> expected = {1, 2, 3};
  std::uint64_t muls = 0;
  const BigInt result = product_combine(gp, cts, expected, std::nullopt, &muls);
  CHECK(result == 1);  // oracle: 2*3*4 = 24 = 1 mod 23
  CHECK(muls == 3);
}

TEST_CASE("x = 1 encrypts to the bare blinding") {
  const GroupParams gp = make_group_from_q(11);
  const auto st = state_with_blinding(gp, 1, 6);
  CHECK(product_encrypt(st, 1).value == 6);
}

TEST_CASE("inputs outside [1, p) are rejected") {
  const GroupParams gp = make_group_from_q(11);
  const auto st = state_with_blinding(gp, 1, 6);
  CHECK_THROWS_AS(product_encrypt(st, 0), OutOfRange);
  CHECK_THROWS_AS(product_encrypt(st, gp.p), OutOfRange);
  CHECK_THROWS_AS(product_encrypt(st, -2), OutOfRange);
}

TEST_CASE("encrypt requires a completed product setup") {
  const GroupParams gp = make_group_from_q(11);
  SetupState st = state_with_blinding(gp, 1, 6);
  st.blinding.reset();
  CHECK_THROWS_AS(product_encrypt(st, 2), NotSetUp);
  SetupState sum_st = state_with_blinding(gp, 1, 6);
  sum_st.phase = Phase::sum;
  CHECK_THROWS_AS(product_encrypt(sum_st, 2), NotSetUp);
}

TEST_CASE("a missing ciphertext is detected before any multiplication") {
  const GroupParams gp = make_group_from_q(11);
  std::vector<ProductCiphertext> cts = {{18, 1, 0}, {18, 2, 0}};
  const std::vector<std::uint32_t> expected = {1, 2, 3};
  std::uint64_t muls = 0;
  CHECK_THROWS_AS(product_combine(gp, cts, expected, std::nullopt, &muls),
                  MissingCiphertext);
  CHECK(muls == 0);

  cts.push_back({18, 1, 0});  // duplicate sender
  CHECK_THROWS_AS(product_combine(gp, cts, expected), MissingCiphertext);

  cts = {{18, 1, 0}, {18, 2, 0}, {12, 9, 0}};  // unexpected sender
  CHECK_THROWS_AS(product_combine(gp, cts, expected), MissingCiphertext);
}

TEST_CASE("aggregator blinding is applied in One-Aggregator combines") {
  const GroupParams gp = make_group_from_q(11);
  // with only the participants' factors the aggregate stays blinded by
  // R_agg^-1; multiplying R_agg recovers the product
  const std::vector<ProductCiphertext> cts = {{18, 1, 0}, {18, 2, 0}};
  const std::vector<std::uint32_t> expected = {1, 2};
  const BigInt without = product_combine(gp, cts, expected);
  const BigInt with_blinding =
      product_combine(gp, cts, expected, BigInt(mod_inverse(without, gp.p)));
  CHECK(with_blinding == 1);
}

TEST_CASE("full product sessions agree with the oracle in both models") {
  RandomSource rng = RandomSource::from_u64(2024);
  const GroupParams gp = generate_group_params(32, rng);

  for (Model model : {Model::participants_only, Model::one_aggregator}) {
    for (std::size_t n : {3u, 5u, 9u}) {
      std::vector<BigInt> x(n);
      BigInt oracle = 1;
      for (auto& xi : x) {
        xi = 1 + rng.uniform_below(gp.p - 1);
        oracle = (oracle * xi) % gp.p;
      }
      Channel ch(std::uint32_t(n) + (model == Model::one_aggregator ? 1 : 0));
      RandomSource session = rng.fork(n);
      CHECK(run_product_session(gp, x, model, session, ch) == oracle);
    }
  }
}

TEST_CASE("products below p need no modular reduction") {
  RandomSource rng = RandomSource::from_u64(5);
  const GroupParams gp = generate_group_params(64, rng);
  // inputs chosen so the true product stays under p
  const std::vector<BigInt> x = {1021, 65537, 9973};
  const BigInt integer_product = x[0] * x[1] * x[2];
  REQUIRE(integer_product < gp.p);

  Channel ch(3);
  RandomSource session = rng.fork(1);
  CHECK(run_product_session(gp, x, Model::participants_only, session, ch) ==
        integer_product);
}

TEST_CASE("blinding factors are never 1 on full-size groups") {
  RandomSource rng = RandomSource::from_u64(31337);
  const GroupParams gp = generate_group_params(64, rng);
  // statistical opacity check: across many sessions no ciphertext ever
  // equals its plaintext, i.e. no R_i collapses to 1
  int sessions = 50;
  for (int s = 0; s < sessions; ++s) {
    const std::vector<BigInt> x = {2, 3, 5, 7};
    Channel ch(4);
    RandomSource session = rng.fork(s);
    run_product_session(gp, x, Model::participants_only, session, ch);
    for (const auto& e : ch.transcript().entries()) {
      if (e.message.type != MsgType::product_ciphertext) continue;
      CHECK(e.message.payload != x[e.message.sender - 1]);
    }
  }
}

TEST_CASE("secret exponents never appear on the wire") {
  RandomSource rng = RandomSource::from_u64(404);
  const GroupParams gp = generate_group_params(64, rng);
  const std::vector<BigInt> x = {11, 22, 33, 44, 55};

  Channel ch(5);
  RandomSource session = rng.fork(9);
  run_product_session(gp, x, Model::participants_only, session, ch);

  // reconstruct the per-party draws: the session forks rng per party id and
  // setup_begin draws once from Z_q
  std::vector<BigInt> secrets;
  for (std::uint32_t id = 1; id <= 5; ++id) {
    RandomSource replay = rng.fork(9);
    RandomSource party = replay.fork(id);
    secrets.push_back(party.uniform_below(gp.q));
  }
  CHECK(transcript_scan(ch.transcript(), secrets).empty());
}
