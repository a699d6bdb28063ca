#include "aggsim/poly_eval.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "aggsim/errors.hpp"
#include "aggsim/product_protocol.hpp"
#include "aggsim/sum_protocol.hpp"
#include "session_util.hpp"

namespace aggsim {

void PolynomialSpec::validate() const {
  if (num_parties == 0) throw InvalidParams("polynomial: num_parties must be >= 1");
  if (num_terms == 0) throw InvalidParams("polynomial: num_terms must be >= 1");
  if (coefficients.size() != num_terms)
    throw InvalidParams("polynomial: coefficient count != num_terms");
  if (exponents.size() != num_parties)
    throw InvalidParams("polynomial: exponent row count != num_parties");
  for (const auto& row : exponents) {
    if (row.size() != num_terms)
      throw InvalidParams("polynomial: exponent row width != num_terms");
    for (const auto& d : row)
      if (d < 0) throw InvalidParams("polynomial: negative exponent");
  }
  for (const auto& c : coefficients)
    if (c < 0) throw InvalidParams("polynomial: negative coefficient");
}

std::string serialize_polynomial(const PolynomialSpec& spec) {
  std::ostringstream os;
  os << spec.num_parties << ' ' << spec.num_terms << '\n';
  for (std::size_t k = 0; k < spec.num_terms; ++k)
    os << (k ? " " : "") << spec.coefficients[k];
  os << '\n';
  for (const auto& row : spec.exponents) {
    for (std::size_t k = 0; k < spec.num_terms; ++k) os << (k ? " " : "") << row[k];
    os << '\n';
  }
  return os.str();
}

PolynomialSpec parse_polynomial(const std::string& text) {
  std::istringstream is(text);
  PolynomialSpec spec;
  if (!(is >> spec.num_parties >> spec.num_terms))
    throw ParseError("polynomial: expected `n m` on line 1");
  if (spec.num_parties == 0 || spec.num_terms == 0 || spec.num_parties > 1'000'000 ||
      spec.num_terms > 1'000'000)
    throw ParseError("polynomial: implausible dimensions");
  auto read_value = [&is](const char* what) {
    std::string token;
    if (!(is >> token)) throw ParseError(std::string("polynomial: missing ") + what);
    try {
      return BigInt(token);
    } catch (const std::exception&) {
      throw ParseError(std::string("polynomial: bad ") + what + " '" + token + "'");
    }
  };
  spec.coefficients.reserve(spec.num_terms);
  for (std::size_t k = 0; k < spec.num_terms; ++k)
    spec.coefficients.push_back(read_value("coefficient"));
  spec.exponents.assign(spec.num_parties, {});
  for (auto& row : spec.exponents) {
    row.reserve(spec.num_terms);
    for (std::size_t k = 0; k < spec.num_terms; ++k) row.push_back(read_value("exponent"));
  }
  std::string trailing;
  if (is >> trailing) throw ParseError("polynomial: trailing content '" + trailing + "'");
  spec.validate();
  return spec;
}

TermClassification classify_terms(const PolynomialSpec& spec) {
  spec.validate();
  TermClassification cls;
  std::vector<std::uint32_t> owners;  // parallel to cls.sum_terms
  for (std::size_t k = 0; k < spec.num_terms; ++k) {
    if (spec.coefficients[k] == 0) continue;  // dead term, dropped
    std::uint32_t contributor = 0;
    std::size_t contributors = 0;
    for (std::size_t i = 0; i < spec.num_parties; ++i) {
      if (spec.exponents[i][k] != 0) {
        ++contributors;
        contributor = static_cast<std::uint32_t>(i + 1);
      }
    }
    if (contributors == 1) {
      cls.sum_terms.push_back(k);
      owners.push_back(contributor);
    } else {
      cls.product_terms.push_back(k);  // includes all-zero columns (constants)
    }
  }
  cls.sum_owners = owners;
  std::sort(cls.sum_owners.begin(), cls.sum_owners.end());
  return cls;
}

std::uint32_t channel_parties_for(const PolynomialSpec& spec, Model model) {
  return static_cast<std::uint32_t>(spec.num_parties) +
         (model == Model::one_aggregator ? 1 : 0);
}

namespace {

constexpr std::uint32_t kProductSession = 1;
constexpr std::uint32_t kSumSession = 2;

struct RunContext {
  const GroupParams& gp;
  const PolynomialSpec& spec;
  const std::vector<BigInt>& inputs;
  Model model;
  Channel& channel;
  std::uint32_t n = 0;
  std::uint32_t aggregator = 0;  // 0 in Participants-Only
  std::map<std::uint32_t, RandomSource> rngs;

  bool aggregated() const { return aggregator != 0; }
  RandomSource& rng_of(std::uint32_t id) { return rngs.at(id); }
};

RunContext make_context(const GroupParams& gp, const PolynomialSpec& spec,
                        const std::vector<BigInt>& inputs, Model model,
                        RandomSource& rng, Channel& channel) {
  spec.validate();
  std::vector<std::string> reasons;
  if (!validate_group_params(gp, &reasons))
    throw InvalidParams("evaluate: invalid group parameters: " + reasons.front());
  if (inputs.size() != spec.num_parties)
    throw InvalidParams("evaluate: input count != num_parties");
  for (const auto& x : inputs)
    if (x < 0 || x >= gp.p) throw OutOfRange("evaluate: input outside [0, p)");

  RunContext ctx{gp, spec, inputs, model, channel, 0, 0, {}};
  ctx.n = static_cast<std::uint32_t>(spec.num_parties);
  if (model == Model::one_aggregator) {
    if (ctx.n < 2) throw InvalidParams("evaluate: One-Aggregator needs >= 2 participants");
    ctx.aggregator = ctx.n + 1;
  } else {
    if (ctx.n < 3) throw InvalidParams("evaluate: Participants-Only needs >= 3 participants");
  }
  if (channel.num_parties() != channel_parties_for(spec, model))
    throw InvalidParams("evaluate: channel party count does not match");
  for (std::uint32_t id = 1; id <= channel.num_parties(); ++id)
    ctx.rngs.emplace(id, rng.fork(id));
  return ctx;
}

// Runs the product protocol once per listed term over a single Setup: each
// party raises its input to the term exponent locally, blinds it, and ships
// it. Returns the recovered term products.
std::map<std::size_t, BigInt> run_product_terms(RunContext& ctx,
                                                const std::vector<std::size_t>& terms) {
  std::map<std::size_t, BigInt> products;
  if (terms.empty()) return products;

  auto& transcript = ctx.channel.transcript();
  std::vector<std::uint32_t> members(ctx.channel.num_parties());
  std::iota(members.begin(), members.end(), 1u);
  auto states = detail::run_setup_exchange(
      ctx.gp, members, Phase::product, kProductSession, ctx.channel,
      [&ctx](std::uint32_t id) -> RandomSource& { return ctx.rng_of(id); });

  std::vector<std::uint32_t> expected(ctx.n);
  std::iota(expected.begin(), expected.end(), 1u);

  for (std::size_t k : terms) {
    const std::uint32_t wire_term = static_cast<std::uint32_t>(k + 1);
    std::vector<ProductCiphertext> own(ctx.n);
    for (std::uint32_t i = 1; i <= ctx.n; ++i) {
      const BigInt& d = ctx.spec.exponents[i - 1][k];
      BigInt value = 1;
      if (d != 0) {
        if (ctx.inputs[i - 1] == 0)
          throw OutOfRange("evaluate: participant " + std::to_string(i) +
                           " has input 0 with a nonzero exponent in product term " +
                           std::to_string(wire_term) +
                           "; zero is not a group element, route it via a sum term");
        value = mod_exp(ctx.inputs[i - 1], d, ctx.gp.p);
        transcript.count_exp(i, 1);
      }
      own[i - 1] = product_encrypt(states.at(i), value, wire_term);
      transcript.count_mul(i, 1);
      ctx.channel.post({MsgType::product_ciphertext, kProductSession, wire_term, i,
                        ctx.aggregated() ? ctx.aggregator : kBroadcast,
                        own[i - 1].value});
    }
    ctx.channel.flush_round();

    if (ctx.aggregated()) {
      std::vector<ProductCiphertext> cts;
      for (const auto& msg : ctx.channel.drain_inbox(ctx.aggregator)) {
        if (msg.type == MsgType::product_ciphertext && msg.term_index == wire_term)
          cts.push_back({msg.payload, msg.sender, msg.term_index});
      }
      std::uint64_t muls = 0;
      products[k] = product_combine(ctx.gp, cts, expected,
                                    states.at(ctx.aggregator).blinding, &muls);
      transcript.count_mul(ctx.aggregator, muls);
    } else {
      BigInt agreed;
      for (std::uint32_t i = 1; i <= ctx.n; ++i) {
        std::vector<ProductCiphertext> cts = {own[i - 1]};
        for (const auto& msg : ctx.channel.drain_inbox(i)) {
          if (msg.type == MsgType::product_ciphertext && msg.term_index == wire_term)
            cts.push_back({msg.payload, msg.sender, msg.term_index});
        }
        std::uint64_t muls = 0;
        BigInt mine = product_combine(ctx.gp, cts, expected, std::nullopt, &muls);
        transcript.count_mul(i, muls);
        if (i == 1)
          agreed = mine;
        else if (mine != agreed)
          throw Error("evaluate: parties disagree on a term product");
      }
      products[k] = agreed;
    }
  }
  return products;
}

// Sum participants (the owners of single-contributor terms) form their own
// ring and push their weighted addends through one sum session. The ring is
// padded with zero-contributing parties until it has 3 members, so the
// blinding never degenerates.
BigInt run_sum_path(RunContext& ctx, const TermClassification& cls) {
  auto& transcript = ctx.channel.transcript();

  std::set<std::uint32_t> member_set(cls.sum_owners.begin(), cls.sum_owners.end());
  const std::size_t ring_target = ctx.aggregated() ? 2 : 3;
  for (std::uint32_t id = 1; id <= ctx.n && member_set.size() < ring_target; ++id)
    member_set.insert(id);
  std::vector<std::uint32_t> contributors(member_set.begin(), member_set.end());
  std::vector<std::uint32_t> members = contributors;
  if (ctx.aggregated()) members.push_back(ctx.aggregator);

  auto states = detail::run_setup_exchange(
      ctx.gp, members, Phase::sum, kSumSession, ctx.channel,
      [&ctx](std::uint32_t id) -> RandomSource& { return ctx.rng_of(id); });

  // Coefficients are public, so every owner weights its own addends locally
  // and encrypts one combined value per session.
  std::map<std::uint32_t, BigInt> addends;
  for (std::uint32_t id : contributors) addends[id] = 0;
  for (std::size_t k : cls.sum_terms) {
    std::uint32_t owner = 0;
    for (std::size_t i = 0; i < ctx.spec.num_parties; ++i) {
      if (ctx.spec.exponents[i][k] != 0) owner = static_cast<std::uint32_t>(i + 1);
    }
    const BigInt power = mod_exp(ctx.inputs[owner - 1], ctx.spec.exponents[owner - 1][k],
                                 ctx.gp.p);
    transcript.count_exp(owner, 1);
    const BigInt weighted = (ctx.spec.coefficients[k] * power) % ctx.gp.p;
    transcript.count_mul(owner, 1);
    addends[owner] = (addends[owner] + weighted) % ctx.gp.p;
  }

  std::vector<SumCiphertext> own;
  for (std::uint32_t id : contributors) {
    SumCiphertext ct = sum_encrypt(states.at(id), addends.at(id), kSumSession);
    transcript.count_mul(id, 2);
    ctx.channel.post({MsgType::sum_ciphertext, kSumSession, 0, id,
                      ctx.aggregated() ? ctx.aggregator : kBroadcast, ct.value});
    own.push_back(ct);
  }
  ctx.channel.flush_round();

  if (ctx.aggregated()) {
    std::vector<SumCiphertext> cts;
    for (const auto& msg : ctx.channel.drain_inbox(ctx.aggregator)) {
      if (msg.type == MsgType::sum_ciphertext && msg.session_id == kSumSession)
        cts.push_back({msg.payload, msg.sender, msg.session_id});
    }
    SumCombineStats stats;
    BigInt partial = sum_combine(ctx.gp, cts, contributors,
                                 states.at(ctx.aggregator).blinding, &stats);
    transcript.count_mul(ctx.aggregator, stats.mul_mod);
    return partial;
  }

  // Participants-Only: the broadcasts reach everyone, so every party (ring
  // member or not) recovers the same partial sum.
  BigInt agreed;
  for (std::uint32_t i = 1; i <= ctx.n; ++i) {
    std::vector<SumCiphertext> cts;
    const bool is_member = member_set.count(i) != 0;
    if (is_member) {
      const std::size_t idx = std::distance(
          contributors.begin(), std::find(contributors.begin(), contributors.end(), i));
      cts.push_back(own[idx]);
    }
    for (const auto& msg : ctx.channel.drain_inbox(i)) {
      if (msg.type == MsgType::sum_ciphertext && msg.session_id == kSumSession)
        cts.push_back({msg.payload, msg.sender, msg.session_id});
    }
    SumCombineStats stats;
    BigInt mine = sum_combine(ctx.gp, cts, contributors, std::nullopt, &stats);
    transcript.count_mul(i, stats.mul_mod);
    if (i == 1)
      agreed = mine;
    else if (mine != agreed)
      throw Error("evaluate: parties disagree on the sum-path partial");
  }
  return agreed;
}

// Linear combination of the public pieces, counted once per evaluator; in
// Participants-Only mode the ring head then announces the (public) result.
BigInt finish(RunContext& ctx, const std::vector<std::size_t>& protocol_terms,
              const std::map<std::size_t, BigInt>& products, const BigInt& constants,
              const BigInt& sum_partial) {
  auto& transcript = ctx.channel.transcript();
  BigInt result = (constants + sum_partial) % ctx.gp.p;
  for (std::size_t k : protocol_terms)
    result = (result + ctx.spec.coefficients[k] * products.at(k)) % ctx.gp.p;

  if (ctx.aggregated()) {
    transcript.count_mul(ctx.aggregator, protocol_terms.size());
    return result;
  }
  for (std::uint32_t i = 1; i <= ctx.n; ++i)
    transcript.count_mul(i, protocol_terms.size());
  ctx.channel.post({MsgType::result_announce, kProductSession, 0, 1, kBroadcast, result});
  ctx.channel.flush_round();
  for (std::uint32_t i = 2; i <= ctx.n; ++i) ctx.channel.drain_inbox(i);
  return result;
}

// Splits product-route terms into public constants (all-zero exponent
// columns) and terms that actually need the protocol.
void split_constants(const RunContext& ctx, const std::vector<std::size_t>& product_terms,
                     std::vector<std::size_t>& protocol_terms, BigInt& constants) {
  constants = 0;
  for (std::size_t k : product_terms) {
    bool all_zero = true;
    for (std::size_t i = 0; i < ctx.spec.num_parties; ++i)
      all_zero &= (ctx.spec.exponents[i][k] == 0);
    if (all_zero)
      constants = (constants + ctx.spec.coefficients[k]) % ctx.gp.p;
    else
      protocol_terms.push_back(k);
  }
}

}  // namespace

BigInt evaluate_basic(const GroupParams& gp, const PolynomialSpec& spec,
                      const std::vector<BigInt>& inputs, Model model, RandomSource& rng,
                      Channel& channel, const EvalOptions& opts) {
  RunContext ctx = make_context(gp, spec, inputs, model, rng, channel);
  const TermClassification cls = classify_terms(spec);
  if (!cls.sum_terms.empty() && !opts.allow_insecure_terms)
    throw InsecureTerm("evaluate_basic: term " + std::to_string(cls.sum_terms.front() + 1) +
                       " has a single contributor; the product protocol would disclose "
                       "that participant's value (use the advanced scheme)");

  // everything, sum terms included, takes the product route
  std::vector<std::size_t> all_terms = cls.product_terms;
  all_terms.insert(all_terms.end(), cls.sum_terms.begin(), cls.sum_terms.end());
  std::sort(all_terms.begin(), all_terms.end());

  std::vector<std::size_t> protocol_terms;
  BigInt constants;
  split_constants(ctx, all_terms, protocol_terms, constants);
  const auto products = run_product_terms(ctx, protocol_terms);
  return finish(ctx, protocol_terms, products, constants, 0);
}

BigInt evaluate_advanced(const GroupParams& gp, const PolynomialSpec& spec,
                         const std::vector<BigInt>& inputs, Model model, RandomSource& rng,
                         Channel& channel) {
  RunContext ctx = make_context(gp, spec, inputs, model, rng, channel);
  const TermClassification cls = classify_terms(spec);
  if (cls.sum_owners.size() == 1)
    throw TooFewSumParticipants(
        "evaluate_advanced: a lone sum participant's addend would be revealed by the "
        "recovered sum (term " + std::to_string(cls.sum_terms.front() + 1) + ")");

  std::vector<std::size_t> protocol_terms;
  BigInt constants;
  split_constants(ctx, cls.product_terms, protocol_terms, constants);
  const auto products = run_product_terms(ctx, protocol_terms);
  const BigInt sum_partial = cls.sum_terms.empty() ? BigInt(0) : run_sum_path(ctx, cls);
  return finish(ctx, protocol_terms, products, constants, sum_partial);
}

}  // namespace aggsim
