#include "aggsim/sum_protocol.hpp"

#include <map>
#include <numeric>

#include "aggsim/errors.hpp"
#include "session_util.hpp"

namespace aggsim {

SumCiphertext sum_encrypt(const SetupState& st, const BigInt& input,
                          std::uint32_t session) {
  if (st.phase != Phase::sum)
    throw NotSetUp("sum_encrypt: state is not a sum-phase setup");
  if (!st.ready()) throw NotSetUp("sum_encrypt: blinding not derived yet");
  if (input < 0 || input >= st.base_prime)
    throw OutOfRange("sum_encrypt: input must lie in [0, p)");
  // 1 + x*p is never a multiple of p, so it is a unit mod p^2 for every x
  const BigInt encoded = (1 + input * st.base_prime) % st.modulus;
  return {(encoded * *st.blinding) % st.modulus, st.position.index, session};
}

BigInt sum_combine(const GroupParams& gp, std::span<const SumCiphertext> cts,
                   std::span<const std::uint32_t> expected_senders,
                   const std::optional<BigInt>& aggregator_blinding,
                   SumCombineStats* stats) {
  std::map<std::uint32_t, const SumCiphertext*> by_sender;
  for (const auto& ct : cts) {
    bool known = false;
    for (std::uint32_t s : expected_senders) known |= (s == ct.sender);
    if (!known)
      throw MissingCiphertext("sum_combine: ciphertext from unexpected sender " +
                              std::to_string(ct.sender));
    if (!by_sender.emplace(ct.sender, &ct).second)
      throw MissingCiphertext("sum_combine: duplicate ciphertext from sender " +
                              std::to_string(ct.sender));
  }
  for (std::uint32_t s : expected_senders) {
    if (!by_sender.count(s))
      throw MissingCiphertext("sum_combine: no ciphertext from participant " +
                              std::to_string(s));
  }

  const BigInt p2 = gp.p_squared();
  SumCombineStats local;
  BigInt acc = 1;
  for (std::uint32_t s : expected_senders) {
    const BigInt& c = by_sender.at(s)->value;
    if (c < 1 || c >= p2) throw OutOfRange("sum_combine: ciphertext outside [1, p^2)");
    if (c % gp.p == 0)
      throw MalformedAggregate("sum_combine: ciphertext is not a unit mod p^2");
    acc = (acc * c) % p2;
    ++local.mul_mod;
  }
  if (aggregator_blinding) {
    acc = (acc * *aggregator_blinding) % p2;
    ++local.mul_mod;
  }

  // Constant-cost decode: no discrete logarithm, no search.
  BigInt residue = acc % gp.p;
  ++local.decode_ops;
  if (residue != 1)
    throw MalformedAggregate("sum_combine: aggregate != 1 mod p (tampering, wrong ring, "
                             "or missing party)");
  BigInt numerator = acc - 1;
  ++local.decode_ops;
  BigInt quotient = numerator / gp.p;  // exact by the check above
  ++local.decode_ops;
  BigInt result = quotient % gp.p;
  ++local.decode_ops;

  if (stats) {
    stats->mul_mod += local.mul_mod;
    stats->decode_ops += local.decode_ops;
  }
  return result;
}

BigInt run_sum_session(const GroupParams& gp, const std::vector<BigInt>& inputs,
                       Model model, RandomSource& rng, Channel& channel,
                       std::uint32_t session_id) {
  std::vector<std::string> reasons;
  if (!validate_group_params(gp, &reasons))
    throw InvalidParams("run_sum_session: invalid group parameters: " + reasons.front());

  const std::uint32_t n = static_cast<std::uint32_t>(inputs.size());
  const bool aggregated = model == Model::one_aggregator;
  if (aggregated ? n < 2 : n < 3)
    throw InvalidParams("run_sum_session: need >= 2 participants with an aggregator, "
                        ">= 3 without");
  const std::uint32_t aggregator = aggregated ? n + 1 : 0;
  const std::uint32_t ring_size = aggregated ? n + 1 : n;
  if (channel.num_parties() != ring_size)
    throw InvalidParams("run_sum_session: channel party count does not match");

  std::map<std::uint32_t, RandomSource> rngs;
  for (std::uint32_t id = 1; id <= ring_size; ++id) rngs.emplace(id, rng.fork(id));
  auto rng_of = [&rngs](std::uint32_t id) -> RandomSource& { return rngs.at(id); };

  std::vector<std::uint32_t> members(ring_size);
  std::iota(members.begin(), members.end(), 1u);
  auto states = detail::run_setup_exchange(gp, members, Phase::sum, session_id,
                                           channel, rng_of);

  auto& transcript = channel.transcript();
  std::vector<SumCiphertext> own(n);
  for (std::uint32_t i = 1; i <= n; ++i) {
    own[i - 1] = sum_encrypt(states.at(i), inputs[i - 1], session_id);
    transcript.count_mul(i, 2);  // plaintext encoding + blinding
    channel.post({MsgType::sum_ciphertext, session_id, 0, i,
                  aggregated ? aggregator : kBroadcast, own[i - 1].value});
  }
  channel.flush_round();

  std::vector<std::uint32_t> expected(n);
  std::iota(expected.begin(), expected.end(), 1u);

  if (aggregated) {
    std::vector<SumCiphertext> cts;
    for (const auto& msg : channel.drain_inbox(aggregator)) {
      if (msg.type == MsgType::sum_ciphertext)
        cts.push_back({msg.payload, msg.sender, msg.session_id});
    }
    SumCombineStats stats;
    BigInt result = sum_combine(gp, cts, expected, states.at(aggregator).blinding, &stats);
    transcript.count_mul(aggregator, stats.mul_mod);
    return result;
  }

  BigInt result;
  for (std::uint32_t i = 1; i <= n; ++i) {
    std::vector<SumCiphertext> cts = {own[i - 1]};
    for (const auto& msg : channel.drain_inbox(i)) {
      if (msg.type == MsgType::sum_ciphertext)
        cts.push_back({msg.payload, msg.sender, msg.session_id});
    }
    SumCombineStats stats;
    BigInt mine = sum_combine(gp, cts, expected, std::nullopt, &stats);
    transcript.count_mul(i, stats.mul_mod);
    if (i == 1)
      result = mine;
    else if (mine != result)
      throw Error("run_sum_session: parties disagree on the result");
  }
  channel.post({MsgType::result_announce, session_id, 0, 1, kBroadcast, result});
  channel.flush_round();
  for (std::uint32_t i = 2; i <= n; ++i) channel.drain_inbox(i);
  return result;
}

}  // namespace aggsim
