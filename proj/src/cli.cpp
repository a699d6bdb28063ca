#include "aggsim/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "aggsim/baseline.hpp"
#include "aggsim/errors.hpp"
#include "aggsim/group.hpp"
#include "aggsim/netsim.hpp"
#include "aggsim/poly_eval.hpp"
#include "aggsim/product_protocol.hpp"
#include "aggsim/sum_protocol.hpp"

namespace aggsim::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path);
  out << content;
}

// `--inputs` takes either a file of values or the values themselves,
// comma- or newline-separated decimals.
std::vector<BigInt> parse_inputs(const std::string& arg) {
  std::string text = std::filesystem::exists(arg) ? read_file(arg) : arg;
  for (char& c : text)
    if (c == ',' || c == '\n' || c == '\r' || c == '\t') c = ' ';
  std::istringstream is(text);
  std::vector<BigInt> values;
  std::string token;
  while (is >> token) {
    try {
      values.push_back(BigInt(token));
    } catch (const std::exception&) {
      throw ParseError("bad input value '" + token + "'");
    }
  }
  if (values.empty()) throw ParseError("no input values given");
  return values;
}

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t seed_flag) {
  if (seed_opt->count() > 0) return seed_flag;
  if (const char* env = std::getenv("AGGSIM_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ParseError("AGGSIM_SEED is not a number");
    }
  }
  return 1;
}

Model parse_model(const std::string& name) {
  if (name == "aggregator") return Model::one_aggregator;
  if (name == "peers") return Model::participants_only;
  throw ParseError("model must be 'aggregator' or 'peers'");
}

GroupParams load_or_generate_params(const std::string& params_file, unsigned qbits,
                                    RandomSource& rng) {
  if (!params_file.empty()) {
    GroupParams gp = parse_group_params(read_file(params_file));
    std::vector<std::string> reasons;
    if (!validate_group_params(gp, &reasons))
      throw InvalidParams("rejected group parameters: " + reasons.front());
    return gp;
  }
  return generate_group_params(qbits, rng);
}

std::vector<BigInt> random_inputs(std::size_t n, const GroupParams& gp, RandomSource& rng,
                                  bool allow_zero) {
  std::vector<BigInt> xs(n);
  for (auto& x : xs)
    x = allow_zero ? rng.uniform_below(gp.M + 1) : 1 + rng.uniform_below(gp.M);
  return xs;
}

struct NRange {
  std::uint32_t from = 0, to = 0, step = 0;
};

NRange parse_n_range(const std::string& text) {
  NRange r;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> r.from >> c1 >> r.to >> c2 >> r.step) || c1 != ':' || c2 != ':' ||
      is.peek() != EOF || r.step == 0 || r.from == 0 || r.to < r.from)
    throw ParseError("--n-range expects A:B:STEP with A <= B and STEP >= 1");
  return r;
}

int cmd_params(unsigned qbits, std::uint64_t seed, const std::string& out_file,
               std::ostream& out) {
  RandomSource rng = RandomSource::from_u64(seed);
  GroupParams gp = generate_group_params(qbits, rng);
  const std::string text = serialize_group_params(gp) + "\n";
  if (out_file.empty())
    out << text;
  else
    write_file(out_file, text);
  return 0;
}

int cmd_run(const std::string& protocol, Model model, std::uint32_t n, std::uint64_t seed,
            const std::string& params_file, unsigned qbits, const std::string& inputs_arg,
            const std::string& transcript_file, std::ostream& out) {
  RandomSource master = RandomSource::from_u64(seed);
  RandomSource params_rng = master.fork(0xA11CE);
  RandomSource session_rng = master.fork(0xB0B);
  GroupParams gp = load_or_generate_params(params_file, qbits, params_rng);

  std::vector<BigInt> inputs;
  if (!inputs_arg.empty()) {
    inputs = parse_inputs(inputs_arg);
    if (n != 0 && n != inputs.size())
      throw ParseError("--n disagrees with the number of input values");
  } else {
    if (n == 0) throw ParseError("give --inputs, --n, or both");
    inputs = random_inputs(n, gp, session_rng, protocol == "sum");
  }

  const auto parties = static_cast<std::uint32_t>(inputs.size()) +
                       (model == Model::one_aggregator ? 1 : 0);
  Channel channel(parties);
  BigInt result;
  if (protocol == "product")
    result = run_product_session(gp, inputs, model, session_rng, channel);
  else if (protocol == "sum")
    result = run_sum_session(gp, inputs, model, session_rng, channel);
  else
    throw ParseError("protocol must be 'product' or 'sum'");

  out << result << "\n";
  if (!transcript_file.empty()) write_file(transcript_file, channel.transcript().dump());
  return 0;
}

int cmd_eval(const std::string& spec_file, const std::string& inputs_arg,
             const std::string& scheme, Model model, std::uint64_t seed,
             const std::string& params_file, unsigned qbits,
             const std::string& transcript_file, std::ostream& out) {
  RandomSource master = RandomSource::from_u64(seed);
  RandomSource params_rng = master.fork(0xA11CE);
  RandomSource session_rng = master.fork(0xB0B);

  PolynomialSpec spec = parse_polynomial(read_file(spec_file));
  GroupParams gp = load_or_generate_params(params_file, qbits, params_rng);
  std::vector<BigInt> inputs = parse_inputs(inputs_arg);
  if (inputs.size() != spec.num_parties)
    throw ParseError("input count does not match the polynomial's participant count");

  Channel channel(channel_parties_for(spec, model));
  BigInt result;
  if (scheme == "basic")
    result = evaluate_basic(gp, spec, inputs, model, session_rng, channel);
  else if (scheme == "advanced")
    result = evaluate_advanced(gp, spec, inputs, model, session_rng, channel);
  else
    throw ParseError("scheme must be 'basic' or 'advanced'");

  out << result << "\n";
  if (!transcript_file.empty()) write_file(transcript_file, channel.transcript().dump());
  return 0;
}

int cmd_baseline(std::uint32_t n, double epsilon, std::uint32_t trials, std::uint64_t seed,
                 std::ostream& out) {
  RandomSource rng = RandomSource::from_u64(seed);
  const double estimate = estimate_coverage_probability(n, epsilon, trials, rng);
  const std::size_t k = coverage_selections(n, epsilon) + 1;
  out << "n,epsilon,k,trials,coverage_estimate,bound\n";
  out << n << ',' << epsilon << ',' << k << ',' << trials << ',' << estimate << ','
      << coverage_lower_bound(n, epsilon) << "\n";
  return 0;
}

// Fixed polynomial motif for `bench --protocol poly`: one full product term,
// one two-party product term and two single-contributor terms, so both
// protocol paths are exercised.
PolynomialSpec bench_polynomial(std::uint32_t n) {
  PolynomialSpec spec;
  spec.num_parties = n;
  spec.num_terms = 4;
  spec.coefficients = {1, 1, 1, 1};
  spec.exponents.assign(n, std::vector<BigInt>(4, 0));
  for (std::uint32_t i = 0; i < n; ++i) spec.exponents[i][0] = 1;
  spec.exponents[0][1] = 1;
  spec.exponents[1][1] = 1;
  spec.exponents[0][2] = 2;
  spec.exponents[1][3] = 3;
  return spec;
}

int cmd_bench(const std::string& protocol, const std::string& range_text, unsigned qbits,
              std::uint32_t reps, Model model, std::uint64_t seed, std::ostream& out) {
  if (protocol != "product" && protocol != "sum" && protocol != "poly")
    throw ParseError("protocol must be 'product', 'sum' or 'poly'");
  const NRange range = parse_n_range(range_text);
  if (reps == 0) throw ParseError("--reps must be >= 1");

  RandomSource master = RandomSource::from_u64(seed);
  RandomSource params_rng = master.fork(0xA11CE);
  GroupParams gp = generate_group_params(qbits, params_rng);

  out << "n,mean_ns,stddev_ns,msgs,bytes\n";
  for (std::uint32_t n = range.from; n <= range.to; n += range.step) {
    std::vector<double> times;
    std::uint64_t msgs = 0, bytes = 0;
    for (std::uint32_t rep = 0; rep < reps; ++rep) {
      RandomSource session_rng = master.fork((std::uint64_t(n) << 20) | rep);
      std::vector<BigInt> inputs = random_inputs(n, gp, session_rng, protocol == "sum");

      const auto parties = n + (model == Model::one_aggregator ? 1 : 0);
      Channel channel(parties);
      const auto start = std::chrono::steady_clock::now();
      if (protocol == "product") {
        run_product_session(gp, inputs, model, session_rng, channel);
      } else if (protocol == "sum") {
        run_sum_session(gp, inputs, model, session_rng, channel);
      } else {
        evaluate_advanced(gp, bench_polynomial(n), inputs, model, session_rng, channel);
      }
      const auto stop = std::chrono::steady_clock::now();
      times.push_back(double(
          std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count()));

      if (rep == 0) {
        for (const auto& e : channel.transcript().entries()) {
          if (e.message.type == MsgType::product_ciphertext ||
              e.message.type == MsgType::sum_ciphertext)
            ++msgs;
        }
        bytes = channel.transcript().wire_bytes();
      }
    }
    double mean = 0;
    for (double t : times) mean += t;
    mean /= double(times.size());
    double var = 0;
    for (double t : times) var += (t - mean) * (t - mean);
    var /= double(times.size());
    out << n << ',' << std::uint64_t(mean) << ',' << std::uint64_t(std::sqrt(var)) << ','
        << msgs << ',' << bytes << "\n";
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"privacy-preserving aggregation protocol simulator"};
  app.require_subcommand(1);

  // params
  auto* params = app.add_subcommand("params", "generate group parameters");
  unsigned p_qbits = 256;
  std::uint64_t p_seed = 0;
  std::string p_out;
  params->add_option("--qbits", p_qbits, "bit length of the prime q")->default_val(256);
  auto* p_seed_opt = params->add_option("--seed", p_seed, "deterministic seed");
  params->add_option("--out", p_out, "write to file instead of stdout");

  // run
  auto* runc = app.add_subcommand("run", "run one product or sum session");
  std::string r_protocol, r_model = "peers", r_params, r_inputs;
  std::string r_transcript = "transcript.txt";
  std::uint32_t r_n = 0;
  std::uint64_t r_seed = 0;
  unsigned r_qbits = 256;
  runc->add_option("--protocol", r_protocol, "product|sum")
      ->required()
      ->check(CLI::IsMember({"product", "sum"}));
  runc->add_option("--model", r_model, "aggregator|peers")
      ->default_val("peers")
      ->check(CLI::IsMember({"aggregator", "peers"}));
  runc->add_option("--n", r_n, "participant count (inputs are drawn randomly)");
  auto* r_seed_opt = runc->add_option("--seed", r_seed, "deterministic seed");
  runc->add_option("--params", r_params, "group parameters file (else generated)");
  runc->add_option("--qbits", r_qbits, "q size when generating params")->default_val(256);
  runc->add_option("--inputs", r_inputs, "file or comma-separated values");
  runc->add_option("--transcript", r_transcript, "transcript dump file")
      ->default_val("transcript.txt");

  // eval
  auto* evalc = app.add_subcommand("eval", "evaluate a polynomial spec");
  std::string e_spec, e_inputs, e_scheme = "advanced", e_model = "peers", e_params,
              e_transcript;
  std::uint64_t e_seed = 0;
  unsigned e_qbits = 256;
  evalc->add_option("--spec", e_spec, "polynomial spec file")->required();
  evalc->add_option("--inputs", e_inputs, "file or comma-separated values")->required();
  evalc->add_option("--scheme", e_scheme, "basic|advanced")
      ->default_val("advanced")
      ->check(CLI::IsMember({"basic", "advanced"}));
  evalc->add_option("--model", e_model, "aggregator|peers")
      ->default_val("peers")
      ->check(CLI::IsMember({"aggregator", "peers"}));
  auto* e_seed_opt = evalc->add_option("--seed", e_seed, "deterministic seed");
  evalc->add_option("--params", e_params, "group parameters file (else generated)");
  evalc->add_option("--qbits", e_qbits, "q size when generating params")->default_val(256);
  evalc->add_option("--transcript", e_transcript, "transcript dump file");

  // baseline
  auto* base = app.add_subcommand("baseline", "segmented-sum coverage Monte Carlo");
  std::uint32_t b_n = 0, b_trials = 10000;
  double b_epsilon = 0.5;
  std::uint64_t b_seed = 0;
  base->add_option("--n", b_n, "participant count")->required();
  base->add_option("--epsilon", b_epsilon, "redundancy constant in (0,1)")->required();
  base->add_option("--trials", b_trials, "Monte Carlo trials")->default_val(10000);
  auto* b_seed_opt = base->add_option("--seed", b_seed, "deterministic seed");

  // bench
  auto* bench = app.add_subcommand("bench", "scaling benchmark, CSV output");
  std::string x_protocol, x_range, x_model = "aggregator";
  unsigned x_qbits = 256;
  std::uint32_t x_reps = 5;
  std::uint64_t x_seed = 0;
  bench->add_option("--protocol", x_protocol, "product|sum|poly")
      ->required()
      ->check(CLI::IsMember({"product", "sum", "poly"}));
  const CLI::Validator range_format(
      [](std::string& s) -> std::string {
        try {
          parse_n_range(s);
        } catch (const std::exception& e) {
          return e.what();
        }
        return {};
      },
      "A:B:STEP");
  bench->add_option("--n-range", x_range, "A:B:STEP")->required()->check(range_format);
  bench->add_option("--qbits", x_qbits, "q size for the generated group")->default_val(256);
  bench->add_option("--reps", x_reps, "repetitions per point")->default_val(5);
  bench->add_option("--model", x_model, "aggregator|peers")
      ->default_val("aggregator")
      ->check(CLI::IsMember({"aggregator", "peers"}));
  auto* x_seed_opt = bench->add_option("--seed", x_seed, "deterministic seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (params->parsed())
      return cmd_params(p_qbits, resolve_seed(p_seed_opt, p_seed), p_out, out);
    if (runc->parsed())
      return cmd_run(r_protocol, parse_model(r_model), r_n,
                     resolve_seed(r_seed_opt, r_seed), r_params, r_qbits, r_inputs,
                     r_transcript, out);
    if (evalc->parsed())
      return cmd_eval(e_spec, e_inputs, e_scheme, parse_model(e_model),
                      resolve_seed(e_seed_opt, e_seed), e_params, e_qbits, e_transcript,
                      out);
    if (base->parsed())
      return cmd_baseline(b_n, b_epsilon, b_trials, resolve_seed(b_seed_opt, b_seed), out);
    if (bench->parsed())
      return cmd_bench(x_protocol, x_range, x_qbits, x_reps, parse_model(x_model),
                       resolve_seed(x_seed_opt, x_seed), out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

}  // namespace aggsim::cli
