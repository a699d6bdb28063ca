#ifndef AGGSIM_RING_HPP
#define AGGSIM_RING_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "aggsim/group.hpp"

namespace aggsim {

/// Which group a protocol phase works in: products run in the order-q
/// subgroup mod p, sums in the order-p(p-1) group mod p^2.
enum class Phase { product, sum };

/// One-Aggregator: an untrusted aggregator joins the ring as an extra member
/// and alone learns the result. Participants-Only: no aggregator, everyone
/// learns the result.
enum class Model { one_aggregator, participants_only };

struct RingPosition {
  std::uint32_t index = 0;        // this party's identifier
  std::uint32_t predecessor = 0;  // ring neighbour with the next-lower id (wraps)
  std::uint32_t successor = 0;    // ring neighbour with the next-higher id (wraps)

  bool operator==(const RingPosition&) const = default;
};

/// Arranges the given party ids in a single cycle by ascending identifier.
/// Ids need not be contiguous. Requires at least 2 members.
std::vector<RingPosition> make_ring(std::vector<std::uint32_t> member_ids);

/// Per-party secret state for one protocol phase. The secret exponent never
/// leaves this struct; only public_share is ever put on the wire.
struct SetupState {
  Phase phase = Phase::product;
  RingPosition position;
  BigInt base_prime;       // p
  BigInt modulus;          // p (product) or p^2 (sum)
  BigInt subgroup_order;   // q, or p(p-1)
  BigInt secret_exponent;  // r_i, uniform in [0, subgroup_order)
  BigInt public_share;     // Y_i = g^{r_i} mod modulus, sent to both neighbours
  std::optional<BigInt> blinding;  // R_i, present once both neighbour shares arrived

  bool ready() const { return blinding.has_value(); }
};

/// Draws the secret exponent and computes the public share to send to BOTH
/// ring neighbours. Throws InvalidParams on structurally broken parameters.
SetupState setup_begin(const GroupParams& gp, const RingPosition& pos, Phase phase,
                       RandomSource& rng);

/// Completes setup once both neighbour shares arrived:
///   R_i = (Y_succ * Y_pred^-1)^{r_i} mod modulus.
/// Received shares are order-tested against the phase subgroup first;
/// out-of-group values raise SubgroupViolation.
void setup_complete(SetupState& st, const BigInt& pred_share, const BigInt& succ_share);

}  // namespace aggsim

#endif
