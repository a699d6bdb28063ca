#ifndef AGGSIM_POLY_EVAL_HPP
#define AGGSIM_POLY_EVAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "aggsim/group.hpp"
#include "aggsim/netsim.hpp"
#include "aggsim/ring.hpp"

namespace aggsim {

/// Public description of f(x) = sum_k c_k * prod_i x_i^{d_{i,k}}.
/// Coefficients and exponents are public by assumption and travel in the
/// clear; only the inputs x_i are private.
struct PolynomialSpec {
  std::size_t num_parties = 0;  // n
  std::size_t num_terms = 0;    // m
  std::vector<BigInt> coefficients;            // size m
  std::vector<std::vector<BigInt>> exponents;  // n rows of m entries

  /// Throws InvalidParams on inconsistent dimensions or negative entries.
  void validate() const;
};

// Text form consumed by the CLI: line 1 `n m`, line 2 the m coefficients in
// decimal, then n lines of m decimal exponents each.
std::string serialize_polynomial(const PolynomialSpec& spec);
PolynomialSpec parse_polynomial(const std::string& text);

/// Which route each term takes. Terms with c_k = 0 are dropped entirely.
struct TermClassification {
  // >= 2 nonzero exponents, or an all-zero column (a public constant)
  std::vector<std::size_t> product_terms;
  // exactly one nonzero exponent; running these through the product protocol
  // would hand the lone contributor's value to everyone
  std::vector<std::size_t> sum_terms;
  // owner of each sum term, ordered by non-decreasing participant index;
  // the same party may appear more than once
  std::vector<std::uint32_t> sum_owners;

  bool operator==(const TermClassification&) const = default;
};

TermClassification classify_terms(const PolynomialSpec& spec);

struct EvalOptions {
  /// Lets evaluate_basic run a polynomial containing single-contributor
  /// terms instead of refusing with InsecureTerm. Only useful for
  /// demonstrating the resulting leak in tests.
  bool allow_insecure_terms = false;
};

/// Basic scheme: every term runs through the product protocol after each
/// party locally raises its input to the term exponent; the evaluator then
/// combines the public term products with the public coefficients. Refuses
/// polynomials with single-contributor terms (InsecureTerm) unless
/// opts.allow_insecure_terms is set.
BigInt evaluate_basic(const GroupParams& gp, const PolynomialSpec& spec,
                      const std::vector<BigInt>& inputs, Model model,
                      RandomSource& rng, Channel& channel,
                      const EvalOptions& opts = {});

/// Advanced scheme: multi-contributor terms run through the product protocol;
/// single-contributor terms are diverted through one sum session whose ring
/// is formed by their owners (padded with zero-contributing parties so the
/// blinding stays non-trivial). Constant terms are added publicly. Refuses
/// runs where the sum path would still expose a single input
/// (TooFewSumParticipants).
BigInt evaluate_advanced(const GroupParams& gp, const PolynomialSpec& spec,
                         const std::vector<BigInt>& inputs, Model model,
                         RandomSource& rng, Channel& channel);

/// Channel size required for a run: n parties plus the aggregator in
/// One-Aggregator mode.
std::uint32_t channel_parties_for(const PolynomialSpec& spec, Model model);

}  // namespace aggsim

#endif
