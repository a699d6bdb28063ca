#include "aggsim/product_protocol.hpp"

#include <map>
#include <numeric>

#include "aggsim/errors.hpp"
#include "session_util.hpp"

namespace aggsim {

ProductCiphertext product_encrypt(const SetupState& st, const BigInt& input,
                                  std::uint32_t term_index) {
  if (st.phase != Phase::product)
    throw NotSetUp("product_encrypt: state is not a product-phase setup");
  if (!st.ready()) throw NotSetUp("product_encrypt: blinding not derived yet");
  if (input <= 0 || input >= st.modulus)
    throw OutOfRange("product_encrypt: input must lie in [1, p)");
  return {(input * *st.blinding) % st.modulus, st.position.index, term_index};
}

namespace {

// Exactly one ciphertext per expected sender, keyed for deterministic
// combining order. Raised before any multiplication happens.
template <typename Ct>
std::map<std::uint32_t, const Ct*> index_by_sender(std::span<const Ct> cts,
                                                   std::span<const std::uint32_t> expected) {
  std::map<std::uint32_t, const Ct*> by_sender;
  for (const auto& ct : cts) {
    bool known = false;
    for (std::uint32_t s : expected) known |= (s == ct.sender);
    if (!known)
      throw MissingCiphertext("combine: ciphertext from unexpected sender " +
                              std::to_string(ct.sender));
    if (!by_sender.emplace(ct.sender, &ct).second)
      throw MissingCiphertext("combine: duplicate ciphertext from sender " +
                              std::to_string(ct.sender));
  }
  for (std::uint32_t s : expected) {
    if (!by_sender.count(s))
      throw MissingCiphertext("combine: no ciphertext from participant " +
                              std::to_string(s));
  }
  return by_sender;
}

}  // namespace

BigInt product_combine(const GroupParams& gp, std::span<const ProductCiphertext> cts,
                       std::span<const std::uint32_t> expected_senders,
                       const std::optional<BigInt>& aggregator_blinding,
                       std::uint64_t* mul_counter) {
  const auto by_sender = index_by_sender(cts, expected_senders);

  std::uint64_t muls = 0;
  BigInt acc = 1;
  for (std::uint32_t s : expected_senders) {
    const BigInt& c = by_sender.at(s)->value;
    if (c < 1 || c >= gp.p)
      throw OutOfRange("product_combine: ciphertext outside [1, p)");
    acc = (acc * c) % gp.p;
    ++muls;
  }
  if (aggregator_blinding) {
    acc = (acc * *aggregator_blinding) % gp.p;
    ++muls;
  }
  if (mul_counter) *mul_counter += muls;
  return acc;
}

BigInt run_product_session(const GroupParams& gp, const std::vector<BigInt>& inputs,
                           Model model, RandomSource& rng, Channel& channel,
                           std::uint32_t session_id) {
  std::vector<std::string> reasons;
  if (!validate_group_params(gp, &reasons))
    throw InvalidParams("run_product_session: invalid group parameters: " + reasons.front());

  const std::uint32_t n = static_cast<std::uint32_t>(inputs.size());
  const bool aggregated = model == Model::one_aggregator;
  if (aggregated ? n < 2 : n < 3)
    throw InvalidParams("run_product_session: need >= 2 participants with an aggregator, "
                        ">= 3 without");
  const std::uint32_t aggregator = aggregated ? n + 1 : 0;
  const std::uint32_t ring_size = aggregated ? n + 1 : n;
  if (channel.num_parties() != ring_size)
    throw InvalidParams("run_product_session: channel party count does not match");

  std::map<std::uint32_t, RandomSource> rngs;
  for (std::uint32_t id = 1; id <= ring_size; ++id) rngs.emplace(id, rng.fork(id));
  auto rng_of = [&rngs](std::uint32_t id) -> RandomSource& { return rngs.at(id); };

  std::vector<std::uint32_t> members(ring_size);
  std::iota(members.begin(), members.end(), 1u);
  auto states = detail::run_setup_exchange(gp, members, Phase::product, session_id,
                                           channel, rng_of);

  auto& transcript = channel.transcript();
  std::vector<ProductCiphertext> own(n);
  for (std::uint32_t i = 1; i <= n; ++i) {
    own[i - 1] = product_encrypt(states.at(i), inputs[i - 1]);
    transcript.count_mul(i, 1);
    channel.post({MsgType::product_ciphertext, session_id, 0, i,
                  aggregated ? aggregator : kBroadcast, own[i - 1].value});
  }
  channel.flush_round();

  std::vector<std::uint32_t> expected(n);
  std::iota(expected.begin(), expected.end(), 1u);

  if (aggregated) {
    std::vector<ProductCiphertext> cts;
    for (const auto& msg : channel.drain_inbox(aggregator)) {
      if (msg.type == MsgType::product_ciphertext)
        cts.push_back({msg.payload, msg.sender, msg.term_index});
    }
    std::uint64_t muls = 0;
    BigInt result = product_combine(gp, cts, expected, states.at(aggregator).blinding, &muls);
    transcript.count_mul(aggregator, muls);
    return result;
  }

  // Participants-Only: everyone combines locally, then the ring head
  // broadcasts the (public) result so the run has a definite outcome on the
  // wire.
  BigInt result;
  for (std::uint32_t i = 1; i <= n; ++i) {
    std::vector<ProductCiphertext> cts = {own[i - 1]};
    for (const auto& msg : channel.drain_inbox(i)) {
      if (msg.type == MsgType::product_ciphertext)
        cts.push_back({msg.payload, msg.sender, msg.term_index});
    }
    std::uint64_t muls = 0;
    BigInt mine = product_combine(gp, cts, expected, std::nullopt, &muls);
    transcript.count_mul(i, muls);
    if (i == 1)
      result = mine;
    else if (mine != result)
      throw Error("run_product_session: parties disagree on the result");
  }
  channel.post({MsgType::result_announce, session_id, 0, 1, kBroadcast, result});
  channel.flush_round();
  for (std::uint32_t i = 2; i <= n; ++i) channel.drain_inbox(i);
  return result;
}

}  // namespace aggsim
