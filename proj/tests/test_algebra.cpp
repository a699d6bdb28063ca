#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "aggsim/bigint.hpp"
#include "aggsim/errors.hpp"
#include "aggsim/group.hpp"
#include "aggsim/random_source.hpp"

using namespace aggsim;

namespace {

// Independent oracle: repeated multiplication, no square-and-multiply.
BigInt naive_pow_mod(const BigInt& base, unsigned exponent, const BigInt& modulus) {
  BigInt acc = 1 % modulus;
  for (unsigned i = 0; i < exponent; ++i) acc = (acc * base) % modulus;
  return acc;
}

bool naive_is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("mod_exp matches the repeated-multiplication oracle") {
  CHECK(mod_exp(2, 11, 23) == naive_pow_mod(2, 11, 23));
  CHECK(mod_exp(2, 11, 23) == 1);
  CHECK(mod_exp(5, 11, 23) == 22);  // 5^11 = -1 mod 23
  CHECK(mod_exp(5, 1, 23) == 5);
  CHECK(mod_exp(7, 0, 23) == 1);
  CHECK(mod_exp(12345, 0, 7) == 1);

  RandomSource rng = RandomSource::from_u64(7);
  for (int i = 0; i < 200; ++i) {
    const BigInt m = 2 + rng.uniform_below(600);
    const BigInt b = rng.uniform_below(m);
    const unsigned e = unsigned(rng.uniform_u64_below(40));
    CHECK(mod_exp(b, e, m) == naive_pow_mod(b, e, m));
  }
  CHECK_THROWS_AS(mod_exp(2, 3, 1), InvalidParams);
}

TEST_CASE("mod_inverse") {
  CHECK(mod_inverse(13, 23) == 16);  // 13*16 = 208 = 9*23 + 1
  CHECK(mod_inverse(8, 23) == 3);    // 8*3 = 24
  CHECK(mod_inverse(1, 97) == 1);
  CHECK_THROWS_AS(mod_inverse(6, 9), NotInvertible);
  CHECK_THROWS_AS(mod_inverse(0, 9), NotInvertible);

  // involution over every modulus up to 50
  for (int m = 2; m <= 50; ++m) {
    for (int a = 1; a < m; ++a) {
      if (boost::multiprecision::gcd(BigInt(a), BigInt(m)) != 1) continue;
      const BigInt inv = mod_inverse(a, m);
      CHECK((inv * a) % m == 1);
      CHECK(mod_inverse(inv, m) == a);
    }
  }
}

TEST_CASE("byte and hex codecs") {
  CHECK(to_bytes(BigInt(0)).empty());
  CHECK(to_bytes(BigInt(0x1234)) == std::vector<std::uint8_t>{0x12, 0x34});
  CHECK(to_hex(BigInt(0)) == "0");
  CHECK(to_hex(BigInt(255)) == "ff");
  CHECK(from_hex("ff") == 255);
  CHECK_THROWS_AS(from_hex("xyz"), ParseError);

  RandomSource rng = RandomSource::from_u64(3);
  for (int i = 0; i < 100; ++i) {
    const BigInt v = rng.uniform_below(BigInt(1) << 200);
    const auto bytes = to_bytes(v);
    if (!bytes.empty()) CHECK(bytes.front() != 0);  // no leading zero byte
    CHECK(from_bytes(bytes) == v);
    CHECK(from_hex(to_hex(v)) == v);
  }
}

TEST_CASE("RandomSource determinism and forking") {
  RandomSource a = RandomSource::from_u64(42);
  RandomSource b = RandomSource::from_u64(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  RandomSource c = RandomSource::from_u64(42);
  RandomSource c1 = c.fork(1);
  RandomSource c2 = c.fork(2);
  CHECK(c1.next_u64() != c2.next_u64());
  // forking does not advance the parent
  RandomSource d = RandomSource::from_u64(42);
  for (int i = 0; i < 100; ++i) CHECK(c.next_u64() == d.next_u64());
}

TEST_CASE("rejection sampling is uniform over Z_7") {
  RandomSource rng = RandomSource::from_u64(99);
  constexpr int kDraws = 100000;
  std::map<int, int> freq;
  for (int i = 0; i < kDraws; ++i) freq[int(rng.uniform_below(7))]++;
  // each residue within 5 sigma of kDraws/7
  const double expected = kDraws / 7.0;
  const double sigma = std::sqrt(kDraws * (1.0 / 7) * (6.0 / 7));
  for (int r = 0; r < 7; ++r) {
    CHECK(std::abs(freq[r] - expected) < 5 * sigma);
  }
}

TEST_CASE("uniform_bits sets the top bit") {
  RandomSource rng = RandomSource::from_u64(5);
  for (unsigned bits : {1u, 2u, 8u, 63u, 64u, 65u, 256u}) {
    for (int i = 0; i < 20; ++i) {
      const BigInt v = rng.uniform_bits(bits);
      CHECK(bit_length(v) == bits);
    }
  }
}

TEST_CASE("is_probable_prime agrees with trial division") {
  RandomSource rng = RandomSource::from_u64(11);
  for (std::uint64_t n = 0; n < 2000; ++n) {
    CHECK(is_probable_prime(BigInt(n), rng, 16) == naive_is_prime(n));
  }
}

TEST_CASE("make_group_from_q(11) reproduces the small reference group") {
  const GroupParams gp = make_group_from_q(11);
  CHECK(gp.q == 11);
  CHECK(gp.p == 23);  // k = 2
  CHECK(gp.h == 5);   // smallest generator of Z_23*
  CHECK(gp.g1 == 2);  // 5^2 mod 23
  // direct oracle checks of the generator relations
  CHECK(naive_pow_mod(5, 11, 23) == 22);
  CHECK(naive_pow_mod(2, 11, 23) == 1);
  CHECK(validate_group_params(gp));
}

TEST_CASE("lift keeps g2 at full order (p=5 reference)") {
  const GroupParams gp = make_group_from_pq(5, 2);
  CHECK(gp.h == 2);
  CHECK(gp.g2 == 2);  // 2^10 mod 25 = 24 != 1, so the order is 20
  CHECK(naive_pow_mod(2, 10, 25) == 24);
  CHECK(validate_group_params(gp));
}

TEST_CASE("lift falls back to h+p when the plain lift degenerates") {
  // z = h^p mod p^2 reduces to a generator of Z_p* but satisfies
  // z^(p-1) = 1 mod p^2, which is exactly the degenerate case.
  for (int q : {11, 2}) {
    const GroupParams gp = make_group_from_q(q);
    const BigInt p2 = gp.p_squared();
    const BigInt degenerate = mod_exp(gp.g2, gp.p, p2);
    REQUIRE(mod_exp(degenerate, gp.p - 1, p2) == 1);
    const BigInt lifted = lift_generator_mod_p2(degenerate, gp.p);
    CHECK(lifted == degenerate + gp.p);
    CHECK(mod_exp(lifted, gp.sum_order(), p2) == 1);
    CHECK(mod_exp(lifted, gp.p - 1, p2) != 1);
    CHECK(mod_exp(lifted, gp.p, p2) != 1);
  }
}

TEST_CASE("generate_group_params honours every invariant") {
  for (unsigned q_bits : {8u, 16u, 64u}) {
    RandomSource rng = RandomSource::from_u64(1000 + q_bits);
    const GroupParams gp = generate_group_params(q_bits, rng);
    CHECK(bit_length(gp.q) == q_bits);
    CHECK((gp.p - 1) % gp.q == 0);
    CHECK(gp.g1 != 1);
    CHECK(mod_exp(gp.g1, gp.q, gp.p) == 1);
    CHECK(mod_exp(gp.g2, gp.sum_order(), gp.p_squared()) == 1);
    CHECK(mod_exp(gp.g2, gp.p - 1, gp.p_squared()) != 1);
    CHECK(mod_exp(gp.g2, gp.p, gp.p_squared()) != 1);
    CHECK(gp.M < gp.p);
    CHECK(validate_group_params(gp));

    // determinism: the same seed reproduces the same group
    RandomSource rng2 = RandomSource::from_u64(1000 + q_bits);
    CHECK(generate_group_params(q_bits, rng2) == gp);
  }
  RandomSource rng = RandomSource::from_u64(1);
  CHECK_THROWS_AS(generate_group_params(7, rng), InvalidParams);
}

TEST_CASE("k-search bound raises NoPrimeFound") {
  GenerateOptions opts;
  opts.max_k_candidates = 1;  // only k = 2 tried; 2*7+1 = 15 is composite
  CHECK_THROWS_AS(make_group_from_q(7, opts), NoPrimeFound);
}

TEST_CASE("validate_group_params rejects broken parameters") {
  GroupParams good = make_group_from_q(11);
  std::vector<std::string> reasons;

  GroupParams bad = good;
  bad.g1 = 1;
  CHECK_FALSE(validate_group_params(bad, &reasons));
  CHECK_FALSE(reasons.empty());

  bad = good;
  bad.p = 29;  // 11 does not divide 28
  CHECK_FALSE(validate_group_params(bad));

  bad = good;
  bad.q = 12;  // not prime
  CHECK_FALSE(validate_group_params(bad));

  bad = good;
  bad.M = bad.p;
  CHECK_FALSE(validate_group_params(bad));

  bad = good;
  bad.g2 = mod_exp(good.g2, good.p, good.p_squared());  // order only p-1
  CHECK_FALSE(validate_group_params(bad, &reasons));
}

TEST_CASE("group params text form is bit-exact") {
  const GroupParams gp = make_group_from_q(11);
  const std::string text = serialize_group_params(gp);
  CHECK(text == "q=b p=17 h=5 g1=2 g2=5 M=16");
  CHECK(parse_group_params(text) == gp);

  CHECK_THROWS_AS(parse_group_params("q=b p=17"), ParseError);
  CHECK_THROWS_AS(parse_group_params(text + " extra"), ParseError);
}

TEST_CASE("g1 has exact prime order q") {
  // for prime q, order divides q, and g1 != 1 excludes order 1
  for (int q : {2, 3, 5, 7, 11, 13}) {
    const GroupParams gp = make_group_from_q(q);
    CHECK(gp.g1 != 1);
    CHECK(mod_exp(gp.g1, gp.q, gp.p) == 1);
  }
}
