#ifndef AGGSIM_SRC_SESSION_UTIL_HPP
#define AGGSIM_SRC_SESSION_UTIL_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "aggsim/group.hpp"
#include "aggsim/netsim.hpp"
#include "aggsim/ring.hpp"

namespace aggsim::detail {

using RngOf = std::function<RandomSource&(std::uint32_t)>;

/// One Setup round for the given ring members over the channel: everyone
/// sends its public share to both neighbours, then derives its blinding from
/// the two shares received. Needs >= 3 members, otherwise predecessor and
/// successor coincide and the blinding degenerates to 1.
std::map<std::uint32_t, SetupState> run_setup_exchange(const GroupParams& gp,
                                                       const std::vector<std::uint32_t>& members,
                                                       Phase phase, std::uint32_t session_id,
                                                       Channel& channel, const RngOf& rng_of);

}  // namespace aggsim::detail

#endif
