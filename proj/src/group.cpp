#include "aggsim/group.hpp"

#include <algorithm>
#include <sstream>

#include "aggsim/errors.hpp"

namespace aggsim {

namespace {

// Deterministic witness stream for primality checks that have no caller rng
// (validation, pinned test groups).
RandomSource validation_rng() { return RandomSource::from_u64(0x616c67656272ULL); }

// Distinct prime factors of p-1 = k*q by trial division up to the k-search
// bound; whatever survives must be the prime q itself.
std::vector<BigInt> distinct_prime_factors(BigInt n) {
  std::vector<BigInt> factors;
  for (BigInt d = 2; d * d <= n && d <= 2'000'000; d += (d == 2 ? 1 : 2)) {
    if (n % d == 0) {
      factors.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) {
    RandomSource rng = validation_rng();
    if (!is_probable_prime(n, rng))
      throw InvalidParams("p-1 has a large composite cofactor; cannot factor");
    factors.push_back(n);
  }
  return factors;
}

bool generates_full_group(const BigInt& h, const BigInt& p,
                          const std::vector<BigInt>& p1_factors) {
  if (h <= 1 || h >= p) return false;
  for (const BigInt& f : p1_factors) {
    if (mod_exp(h, (p - 1) / f, p) == 1) return false;
  }
  return true;
}

BigInt default_input_bound(const BigInt& p) {
  const BigInt twenty_bit = (BigInt(1) << 20) - 1;  // paper-sized default
  return std::min(twenty_bit, BigInt(p - 1));
}

GroupParams assemble(const BigInt& q, const BigInt& p, const BigInt& h) {
  GroupParams gp;
  gp.q = q;
  gp.p = p;
  gp.h = h;
  gp.g1 = mod_exp(h, (p - 1) / q, p);
  gp.g2 = lift_generator_mod_p2(h, p);
  gp.M = default_input_bound(p);
  return gp;
}

BigInt find_prime_p(const BigInt& q, RandomSource& rng, const GenerateOptions& opts) {
  BigInt p;
  BigInt k = 2;
  for (std::uint64_t tried = 0; tried < opts.max_k_candidates; ++tried, k += 2) {
    p = k * q + 1;
    if (is_probable_prime(p, rng, opts.mr_rounds)) return p;
  }
  throw NoPrimeFound("no prime p = k*q + 1 within the k-search bound");
}

}  // namespace

BigInt lift_generator_mod_p2(const BigInt& h, const BigInt& p) {
  // h generates Z_p*; mod p^2 its order is either p(p-1) or just p-1. In the
  // degenerate case h+p is another lift of the same residue and its order is
  // always the full p(p-1).
  const BigInt p2 = p * p;
  if (mod_exp(h, p - 1, p2) != 1) return h;
  return h + p;
}

GroupParams generate_group_params(unsigned q_bits, RandomSource& rng,
                                  const GenerateOptions& opts) {
  if (q_bits < 8) throw InvalidParams("generate_group_params: q_bits must be >= 8");

  BigInt q;
  do {
    q = rng.uniform_bits(q_bits) | 1;
  } while (!is_probable_prime(q, rng, opts.mr_rounds));

  const BigInt p = find_prime_p(q, rng, opts);
  const auto factors = distinct_prime_factors(p - 1);

  BigInt h;
  do {
    h = 2 + rng.uniform_below(p - 3);  // [2, p-2]
  } while (!generates_full_group(h, p, factors));

  return assemble(q, p, h);
}

GroupParams make_group_from_q(const BigInt& q, const GenerateOptions& opts) {
  RandomSource rng = validation_rng();
  if (q < 2 || !is_probable_prime(q, rng, opts.mr_rounds))
    throw InvalidParams("make_group_from_q: q is not prime");
  const BigInt p = find_prime_p(q, rng, opts);
  return make_group_from_pq(p, q);
}

GroupParams make_group_from_pq(const BigInt& p, const BigInt& q) {
  RandomSource rng = validation_rng();
  if (q < 2 || !is_probable_prime(q, rng)) throw InvalidParams("q is not prime");
  if (p < 3 || !is_probable_prime(p, rng)) throw InvalidParams("p is not prime");
  if ((p - 1) % q != 0) throw InvalidParams("q does not divide p-1");

  const auto factors = distinct_prime_factors(p - 1);
  for (BigInt h = 2; h < p; ++h) {
    if (generates_full_group(h, p, factors)) return assemble(q, p, h);
  }
  throw InvalidParams("no generator found");  // unreachable for prime p
}

bool validate_group_params(const GroupParams& gp, std::vector<std::string>* reasons) {
  std::vector<std::string> why;
  RandomSource rng = validation_rng();

  if (gp.q < 2 || !is_probable_prime(gp.q, rng)) why.push_back("q is not prime");
  if (gp.p < 3 || !is_probable_prime(gp.p, rng)) why.push_back("p is not prime");
  if (gp.q >= 2 && gp.p >= 3 && (gp.p - 1) % gp.q != 0)
    why.push_back("q does not divide p-1");

  if (gp.p >= 3) {
    if (gp.g1 <= 0 || gp.g1 >= gp.p) {
      why.push_back("g1 out of range");
    } else {
      if (gp.g1 == 1) why.push_back("g1 is the identity");
      if (gp.q >= 1 && mod_exp(gp.g1, gp.q, gp.p) != 1) why.push_back("g1^q != 1 mod p");
    }

    const BigInt p2 = gp.p_squared();
    if (gp.g2 <= 0 || gp.g2 >= p2) {
      why.push_back("g2 out of range");
    } else {
      if (mod_exp(gp.g2, gp.sum_order(), p2) != 1)
        why.push_back("g2^(p(p-1)) != 1 mod p^2");
      if (mod_exp(gp.g2, gp.p - 1, p2) == 1)
        why.push_back("g2^(p-1) = 1 mod p^2 (order too small)");
      if (mod_exp(gp.g2, gp.p, p2) == 1)
        why.push_back("g2^p = 1 mod p^2 (order too small)");
    }

    if (gp.M < 1 || gp.M >= gp.p) why.push_back("M out of range [1, p)");
  }

  if (reasons) *reasons = why;
  return why.empty();
}

std::string serialize_group_params(const GroupParams& gp) {
  std::ostringstream os;
  os << "q=" << to_hex(gp.q) << " p=" << to_hex(gp.p) << " h=" << to_hex(gp.h)
     << " g1=" << to_hex(gp.g1) << " g2=" << to_hex(gp.g2) << " M=" << to_hex(gp.M);
  return os.str();
}

GroupParams parse_group_params(const std::string& text) {
  std::istringstream is(text);
  const char* keys[] = {"q", "p", "h", "g1", "g2", "M"};
  BigInt* fields[6];
  GroupParams gp;
  fields[0] = &gp.q;
  fields[1] = &gp.p;
  fields[2] = &gp.h;
  fields[3] = &gp.g1;
  fields[4] = &gp.g2;
  fields[5] = &gp.M;
  for (int i = 0; i < 6; ++i) {
    std::string token;
    if (!(is >> token)) throw ParseError("group params: missing field");
    const std::string prefix = std::string(keys[i]) + "=";
    if (token.rfind(prefix, 0) != 0)
      throw ParseError("group params: expected " + prefix + "<hex>, got '" + token + "'");
    *fields[i] = from_hex(token.substr(prefix.size()));
  }
  std::string trailing;
  if (is >> trailing) throw ParseError("group params: trailing content '" + trailing + "'");
  return gp;
}

}  // namespace aggsim
