#include "session_util.hpp"

#include "aggsim/errors.hpp"

namespace aggsim::detail {

std::map<std::uint32_t, SetupState> run_setup_exchange(const GroupParams& gp,
                                                       const std::vector<std::uint32_t>& members,
                                                       Phase phase, std::uint32_t session_id,
                                                       Channel& channel, const RngOf& rng_of) {
  if (members.size() < 3)
    throw InvalidParams("setup exchange: a ring needs at least 3 members");

  const auto ring = make_ring(members);
  auto& transcript = channel.transcript();

  std::map<std::uint32_t, SetupState> states;
  for (const auto& pos : ring) {
    SetupState st = setup_begin(gp, pos, phase, rng_of(pos.index));
    transcript.count_exp(pos.index, 1);
    for (std::uint32_t neighbour : {pos.predecessor, pos.successor}) {
      channel.post({MsgType::setup_share, session_id, 0, pos.index, neighbour,
                    st.public_share});
    }
    states.emplace(pos.index, std::move(st));
  }
  channel.flush_round();

  for (const auto& pos : ring) {
    BigInt pred_share, succ_share;
    bool have_pred = false, have_succ = false;
    for (const auto& msg : channel.drain_inbox(pos.index)) {
      if (msg.type != MsgType::setup_share || msg.session_id != session_id) continue;
      if (msg.sender == pos.predecessor) {
        pred_share = msg.payload;
        have_pred = true;
      }
      if (msg.sender == pos.successor) {
        succ_share = msg.payload;
        have_succ = true;
      }
    }
    if (!have_pred || !have_succ)
      throw Error("setup exchange: neighbour share did not arrive");
    setup_complete(states.at(pos.index), pred_share, succ_share);
    transcript.count_exp(pos.index, 3);
    transcript.count_mul(pos.index, 1);
  }
  return states;
}

}  // namespace aggsim::detail
