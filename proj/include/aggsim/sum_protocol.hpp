#ifndef AGGSIM_SUM_PROTOCOL_HPP
#define AGGSIM_SUM_PROTOCOL_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aggsim/group.hpp"
#include "aggsim/netsim.hpp"
#include "aggsim/ring.hpp"

namespace aggsim {

struct SumCiphertext {
  BigInt value;  // (1 + x_i*p) * R_i mod p^2, always a unit mod p^2
  std::uint32_t sender = 0;
  std::uint32_t session = 0;
};

struct SumCombineStats {
  std::uint64_t mul_mod = 0;
  // modular operations spent turning the aggregate back into the sum;
  // constant by construction (no discrete-log search)
  std::uint64_t decode_ops = 0;
};

/// C_i = (1 + x_i*p) * R_i mod p^2. Requires a completed sum-phase setup
/// (NotSetUp) and 0 <= input < p (OutOfRange). Every input is admissible:
/// 1 + x*p is a unit mod p^2 for all x, including 0.
SumCiphertext sum_encrypt(const SetupState& st, const BigInt& input,
                          std::uint32_t session = 1);

/// Multiplies one ciphertext per expected sender into
///   C = [R_{n+1}] * prod C_i = 1 + p*sum(x_i) mod p^2,
/// checks C = 1 mod p (MalformedAggregate otherwise: tampering, wrong ring or
/// a missing party), and returns (C-1)/p mod p. The division is exact and
/// needs no brute-force search.
BigInt sum_combine(const GroupParams& gp, std::span<const SumCiphertext> cts,
                   std::span<const std::uint32_t> expected_senders,
                   const std::optional<BigInt>& aggregator_blinding = std::nullopt,
                   SumCombineStats* stats = nullptr);

/// Runs one full sum session (Setup, Encrypt, Sum) over the channel and
/// returns sum(inputs) mod p. Channel layout as in run_product_session.
BigInt run_sum_session(const GroupParams& gp, const std::vector<BigInt>& inputs,
                       Model model, RandomSource& rng, Channel& channel,
                       std::uint32_t session_id = 1);

}  // namespace aggsim

#endif
