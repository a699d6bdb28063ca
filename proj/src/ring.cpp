#include "aggsim/ring.hpp"

#include <algorithm>

#include "aggsim/errors.hpp"

namespace aggsim {

std::vector<RingPosition> make_ring(std::vector<std::uint32_t> member_ids) {
  if (member_ids.size() < 2) throw InvalidParams("make_ring: need at least 2 members");
  std::sort(member_ids.begin(), member_ids.end());
  if (std::adjacent_find(member_ids.begin(), member_ids.end()) != member_ids.end())
    throw InvalidParams("make_ring: duplicate member id");

  const std::size_t n = member_ids.size();
  std::vector<RingPosition> ring(n);
  for (std::size_t i = 0; i < n; ++i) {
    ring[i].index = member_ids[i];
    ring[i].predecessor = member_ids[(i + n - 1) % n];
    ring[i].successor = member_ids[(i + 1) % n];
  }
  return ring;
}

SetupState setup_begin(const GroupParams& gp, const RingPosition& pos, Phase phase,
                       RandomSource& rng) {
  // cheap structural checks; full parameter validation is a session concern
  if (gp.q < 2 || gp.p < 3 || gp.g1 <= 0 || gp.g1 >= gp.p || gp.g2 <= 0 ||
      gp.g2 >= gp.p_squared() || gp.M < 1 || gp.M >= gp.p)
    throw InvalidParams("setup_begin: malformed group parameters");
  if (pos.index == 0 || pos.predecessor == 0 || pos.successor == 0)
    throw InvalidParams("setup_begin: unset ring position");

  SetupState st;
  st.phase = phase;
  st.position = pos;
  st.base_prime = gp.p;
  if (phase == Phase::product) {
    st.modulus = gp.p;
    st.subgroup_order = gp.q;
    st.secret_exponent = rng.uniform_below(gp.q);
    st.public_share = mod_exp(gp.g1, st.secret_exponent, st.modulus);
  } else {
    st.modulus = gp.p_squared();
    st.subgroup_order = gp.sum_order();
    st.secret_exponent = rng.uniform_below(st.subgroup_order);
    st.public_share = mod_exp(gp.g2, st.secret_exponent, st.modulus);
  }
  return st;
}

namespace {

void check_membership(const SetupState& st, const BigInt& share, const char* which) {
  if (share < 1 || share >= st.modulus)
    throw SubgroupViolation(std::string("setup_complete: ") + which +
                            " share outside [1, modulus)");
  if (mod_exp(share, st.subgroup_order, st.modulus) != 1)
    throw SubgroupViolation(std::string("setup_complete: ") + which +
                            " share fails the subgroup order test");
}

}  // namespace

void setup_complete(SetupState& st, const BigInt& pred_share, const BigInt& succ_share) {
  check_membership(st, pred_share, "predecessor");
  check_membership(st, succ_share, "successor");
  const BigInt ratio = (succ_share * mod_inverse(pred_share, st.modulus)) % st.modulus;
  st.blinding = mod_exp(ratio, st.secret_exponent, st.modulus);
}

}  // namespace aggsim
