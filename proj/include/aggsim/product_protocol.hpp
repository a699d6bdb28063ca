#ifndef AGGSIM_PRODUCT_PROTOCOL_HPP
#define AGGSIM_PRODUCT_PROTOCOL_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aggsim/group.hpp"
#include "aggsim/netsim.hpp"
#include "aggsim/ring.hpp"

namespace aggsim {

struct ProductCiphertext {
  BigInt value;  // x_i * R_i mod p
  std::uint32_t sender = 0;
  std::uint32_t term_index = 0;  // which polynomial term; 0 for standalone runs
};

/// C_i = x_i * R_i mod p. Requires a completed product-phase setup (NotSetUp)
/// and 0 < input < p (OutOfRange); non-participation is expressed by input 1.
ProductCiphertext product_encrypt(const SetupState& st, const BigInt& input,
                                  std::uint32_t term_index = 0);

/// Multiplies one ciphertext per expected sender; the ring blinding cancels
/// and the product of the inputs mod p remains. In One-Aggregator mode pass
/// the aggregator's own blinding R_{n+1}. Raises MissingCiphertext unless
/// every expected sender contributed exactly once. `mul_counter`, when given,
/// is incremented once per modular multiplication performed.
BigInt product_combine(const GroupParams& gp, std::span<const ProductCiphertext> cts,
                       std::span<const std::uint32_t> expected_senders,
                       const std::optional<BigInt>& aggregator_blinding = std::nullopt,
                       std::uint64_t* mul_counter = nullptr);

/// Runs one full product session (Setup, Encrypt, Product) for `inputs` over
/// the channel and returns prod(inputs) mod p. The channel must have
/// inputs.size() parties registered (plus one more, the aggregator, in
/// One-Aggregator mode). In Participants-Only mode every party combines
/// locally and the ring head broadcasts the result; in One-Aggregator mode
/// only the aggregator learns it.
BigInt run_product_session(const GroupParams& gp, const std::vector<BigInt>& inputs,
                           Model model, RandomSource& rng, Channel& channel,
                           std::uint32_t session_id = 1);

}  // namespace aggsim

#endif
