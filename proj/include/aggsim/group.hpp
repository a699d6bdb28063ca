#ifndef AGGSIM_GROUP_HPP
#define AGGSIM_GROUP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "aggsim/bigint.hpp"
#include "aggsim/random_source.hpp"

namespace aggsim {

/// Algebraic setting shared by every protocol: a prime-order-q subgroup of
/// Z_p* carries products, and the order-p(p-1) unit group mod p^2 carries
/// sums. All fields are public parameters; instances are immutable after
/// construction and safe to share across threads.
struct GroupParams {
  BigInt q;   // prime order of the product subgroup
  BigInt p;   // prime modulus with p = k*q + 1
  BigInt h;   // generator of the full multiplicative group mod p
  BigInt g1;  // generator of the order-q subgroup: h^((p-1)/q) mod p
  BigInt g2;  // generator of the order-p(p-1) group mod p^2
  BigInt M;   // public upper bound on participant inputs, M < p

  BigInt p_squared() const { return p * p; }
  // order of g2; also the exponent domain for the sum phase
  BigInt sum_order() const { return p * (p - 1); }

  bool operator==(const GroupParams&) const = default;
};

struct GenerateOptions {
  int mr_rounds = 64;
  // The p = k*q + 1 search walks k = 2, 4, 6, ... and gives up after this
  // many candidates (NoPrimeFound).
  std::uint64_t max_k_candidates = 1'000'000;
};

/// Samples a q_bits-bit prime q, finds the smallest even k with p = k*q + 1
/// prime, picks a random generator h of Z_p*, and derives g1 and g2.
/// Requires q_bits >= 8. Deterministic given the rng stream.
GroupParams generate_group_params(unsigned q_bits, RandomSource& rng,
                                  const GenerateOptions& opts = {});

/// Deterministic variants for pinned test groups: smallest admissible k (or a
/// caller-chosen p with q | p-1) and the smallest generator h.
GroupParams make_group_from_q(const BigInt& q, const GenerateOptions& opts = {});
GroupParams make_group_from_pq(const BigInt& p, const BigInt& q);

/// Given a generator h of Z_p*, returns a lift that generates the full
/// order-p(p-1) group mod p^2: h itself unless h^(p-1) = 1 mod p^2, in which
/// case h + p (which never satisfies that congruence at the same time).
BigInt lift_generator_mod_p2(const BigInt& h, const BigInt& p);

/// True iff every GroupParams invariant holds; hand-supplied parameters are
/// rejected with one reason per failed check when `reasons` is non-null.
bool validate_group_params(const GroupParams& gp,
                           std::vector<std::string>* reasons = nullptr);

// Flat text form `q=<hex> p=<hex> h=<hex> g1=<hex> g2=<hex> M=<hex>`,
// lowercase hex, single spaces. Bit-exact for golden-file tests.
std::string serialize_group_params(const GroupParams& gp);
GroupParams parse_group_params(const std::string& text);

}  // namespace aggsim

#endif
