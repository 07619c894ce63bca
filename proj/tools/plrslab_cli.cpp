#include "plrslab/census.hpp"
#include "plrslab/interval.hpp"
#include "plrslab/rng.hpp"
#include "plrslab/serialize.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr const char* kVersion = "0.1.0";

using plrs::BigInt;
using plrs::error;
using plrs::errc;
using nlohmann::json;

int exit_code_for(errc code) {
  switch (code) {
    case errc::budget_too_small:
    case errc::budget_exceeded:
      return 3;
    case errc::no_legal_decomposition:
    case errc::multiple_legal_decompositions:
    case errc::no_convergence:
    case errc::internal_invariant:
      return 4;
    default:
      return 2;
  }
}

void write_output(const std::string& path, const std::string& payload) {
  if (path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::infeasible, "cannot open output file " + path);
  out << payload;
}

std::string coeffs_csv(const std::vector<long long>& coeffs) {
  std::ostringstream out;
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (i) out << ",";
    out << coeffs[i];
  }
  return out.str();
}

json config_echo(const std::string& command, const std::vector<long long>& coeffs) {
  return json{{"tool", "plrslab"}, {"version", kVersion}, {"command", command},
              {"coeffs", coeffs}};
}

BigInt parse_big(const std::string& text) {
  if (text.empty()) throw error(errc::zero_or_negative_input, "empty number");
  for (char c : text) {
    if (c < '0' || c > '9') throw error(errc::zero_or_negative_input, "not a decimal number: " + text);
  }
  return BigInt(text);
}

std::string decomposition_text(const plrs::Decomposition& d, plrs::SequenceCache& cache) {
  if (d.empty()) return "0 (empty decomposition)";
  std::ostringstream values, symbols;
  const auto& entries = d.entries();
  for (size_t i = entries.size(); i-- > 0;) {
    const plrs::Entry& e = entries[i];
    if (i + 1 < entries.size()) {
      values << " + ";
      symbols << " + ";
    }
    if (e.coeff > 1) {
      values << e.coeff << "*" << cache.term(e.index).str();
      symbols << e.coeff << "*G" << e.index;
    } else {
      values << cache.term(e.index).str();
      symbols << "G" << e.index;
    }
  }
  return values.str() + "  [" + symbols.str() + "]";
}

struct CommonOpts {
  std::vector<long long> coeffs;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_format = true) {
  cmd->add_option("--coeffs", opts.coeffs, "recurrence coefficients c_1,..,c_L")
      ->required()
      ->delimiter(',');
  cmd->add_option("--out", opts.out, "output path (default stdout)");
  if (with_format) cmd->add_option("--format", opts.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", opts.seed, "random seed (default 0)");
  cmd->add_option("--threads", opts.threads, "worker threads; results are independent of this")
      ->check(CLI::PositiveNumber);
}

// ---------------------------------------------------------------- seq ----

int run_seq(const CommonOpts& opts, int n_max) {
  plrs::SequenceCache cache(plrs::validate_plrs(opts.coeffs));
  if (n_max < 1) throw error(errc::zero_or_negative_input, "--n must be >= 1");
  if (opts.format == "json") {
    json terms = json::array();
    for (int n = 1; n <= n_max; ++n) terms.push_back({n, cache.term(n).str()});
    json doc = {{"config", config_echo("seq", opts.coeffs)}, {"n", n_max}, {"terms", terms}};
    write_output(opts.out, doc.dump(2));
  } else {
    std::ostringstream body;
    body << "# plrslab v" << kVersion << " seq --coeffs " << coeffs_csv(opts.coeffs) << " --n "
         << n_max << "\n";
    body << plrs::sequence_to_csv(cache, n_max);
    write_output(opts.out, body.str());
  }
  return 0;
}

// ---------------------------------------------------------- decompose ----

int run_decompose(const CommonOpts& opts, const std::string& number) {
  plrs::SequenceCache cache(plrs::validate_plrs(opts.coeffs));
  const BigInt value = parse_big(number);

  plrs::Decomposition d;
  if (cache.plrs().monotone()) {
    d = plrs::decompose_greedy(cache, value);
  } else if (value.is_zero()) {
    d = plrs::Decomposition();
  } else {
    const int budget = cache.find_top_index(value);
    if (budget > 2000)
      std::cerr << "note: general search over " << budget << " indices may be slow\n";
    d = plrs::decompose_general(cache, value, budget);
  }

  const bool legal = plrs::is_legal(cache.plrs(), d);
  if (!legal) throw error(errc::internal_invariant, "produced an illegal decomposition");

  if (opts.format == "json") {
    json doc = {{"config", config_echo("decompose", opts.coeffs)},
                {"n", value.str()},
                {"decomposition", plrs::to_json(d)},
                {"summands", d.summand_count()},
                {"gaps", d.gap_lengths()},
                {"legal", legal}};
    write_output(opts.out, doc.dump(2));
  } else {
    std::ostringstream body;
    body << value.str() << " = " << decomposition_text(d, cache) << "\n";
    body << "summands: " << d.summand_count() << "\n";
    body << "gaps:";
    for (int g : d.gap_lengths()) body << " " << g;
    body << "\nlegal: " << (legal ? "yes" : "no") << "\n";
    write_output(opts.out, body.str());
  }
  return 0;
}

// --------------------------------------------------------------- dist ----

struct DistOpts {
  int upto_index = 0;
  std::string lo;
  std::string len;
  int counterexample_n = 0;
  std::string mode = "exhaustive";
  std::uint64_t samples = 2000;
};

int run_dist(const CommonOpts& opts, const DistOpts& dist) {
  plrs::SequenceCache cache(plrs::validate_plrs(opts.coeffs));
  plrs::interval::WalkSpec walk;
  walk.exhaustive = dist.mode == "exhaustive";
  walk.samples = dist.samples;
  walk.seed = opts.seed;
  walk.threads = opts.threads;

  json config = config_echo("dist", opts.coeffs);
  config["seed"] = opts.seed;
  config["mode"] = dist.mode;

  plrs::DistributionSummary summary;
  json extra = json::object();
  std::string subject;
  if (dist.upto_index > 0) {
    summary = plrs::interval::exact_count_distribution(cache, dist.upto_index);
    subject = "upto-index " + std::to_string(dist.upto_index);
    config["upto_index"] = dist.upto_index;
  } else if (dist.counterexample_n > 0) {
    const auto ce = plrs::interval::counterexample_interval(cache, dist.counterexample_n);
    summary = plrs::interval::histogram_over_interval(cache, ce.lo, ce.length, walk);
    subject = "counterexample-n " + std::to_string(dist.counterexample_n);
    config["counterexample_n"] = dist.counterexample_n;
    extra["interval"] = {{"lo", ce.lo.str()}, {"length", ce.length.str()}};
    extra["bimodal"] = plrs::is_bimodal(summary);
  } else if (!dist.lo.empty() && !dist.len.empty()) {
    const BigInt lo = parse_big(dist.lo);
    const BigInt len = parse_big(dist.len);
    summary = plrs::interval::histogram_over_interval(cache, lo, len, walk);
    subject = "lo/len interval";
    config["lo"] = dist.lo;
    config["len"] = dist.len;
  } else {
    throw error(errc::zero_or_negative_input,
                "pass --upto-index, --lo/--len, or --counterexample-n");
  }

  if (opts.format == "json") {
    json doc = {{"config", config}, {"distribution", plrs::to_json(summary)}};
    for (auto& [key, val] : extra.items()) doc[key] = val;
    write_output(opts.out, doc.dump(2));
  } else {
    std::ostringstream body;
    body << "# plrslab v" << kVersion << " dist --coeffs " << coeffs_csv(opts.coeffs) << " ("
         << subject << ", seed " << opts.seed << ")\n";
    if (extra.contains("bimodal"))
      body << "# bimodal: " << (extra["bimodal"].get<bool>() ? "true" : "false") << "\n";
    body << plrs::distribution_to_csv(summary);
    write_output(opts.out, body.str());
  }
  return 0;
}

// -------------------------------------------------------- subinterval ----

struct SubOpts {
  int n = 0;
  int alpha = 0;
  int q = 0;
  std::uint64_t samples = 100;
  std::uint64_t walk_budget = 10'000'000;
  std::uint64_t walk_samples = 2000;
};

int run_subinterval(const CommonOpts& opts, const SubOpts& sub) {
  plrs::SequenceCache cache(plrs::validate_plrs(opts.coeffs));
  const int alpha = sub.alpha > 0 ? sub.alpha : plrs::interval::default_alpha(sub.n);
  const int q = sub.q > 0 ? sub.q : plrs::interval::default_q(sub.n, alpha);
  const auto params = plrs::interval::IntervalParams::validated(sub.n, alpha, q);
  if (sub.samples < 1) throw error(errc::zero_or_negative_input, "--samples must be >= 1");

  const BigInt& g_lo = cache.term(params.n);
  const BigInt range = cache.term(params.n + 1) - g_lo;
  cache.term(params.n + 2);
  if (!cache.plrs().monotone()) cache.max_tail(params.n + 1, 0);

  const int run_needed = 3 * cache.plrs().length();
  std::vector<plrs::interval::SubintervalReport> reports(sub.samples);

  const int threads = std::max(1, opts.threads);
  const std::uint64_t chunk = (sub.samples + threads - 1) / threads;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    const std::uint64_t begin = std::min<std::uint64_t>(sub.samples, w * chunk);
    const std::uint64_t end = std::min<std::uint64_t>(sub.samples, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      for (std::uint64_t i = begin; i < end; ++i) {
        plrs::BitStream bits(opts.seed, i);
        const BigInt m = g_lo + plrs::uniform_below(bits, range);
        plrs::interval::WalkSpec walk;
        walk.budget = BigInt(sub.walk_budget);
        walk.samples = sub.walk_samples;
        walk.seed = opts.seed ^ (0x6A09E667F3BCC909ULL + (i << 1));
        reports[i] = plrs::interval::subinterval_experiment(m, params, cache, walk);
      }
    });
  }
  for (auto& t : pool) t.join();

  std::vector<double> passing_ks;
  std::uint64_t passing = 0;
  long long max_shift = 0;
  std::uint64_t violations = 0;
  bool all_gates = true;
  for (const auto& r : reports) {
    if (r.zero_run_found) {
      ++passing;
      passing_ks.push_back(r.distribution.ks_to_normal);
      max_shift = std::max(max_shift, r.shift_error_max);
      violations += r.shift_violations;
      all_gates = all_gates && r.c3_constant && r.bijection_verified;
    }
  }
  std::sort(passing_ks.begin(), passing_ks.end());
  const double median_ks =
      passing_ks.empty()
          ? 0.0
          : (passing_ks.size() % 2 ? passing_ks[passing_ks.size() / 2]
                                   : 0.5 * (passing_ks[passing_ks.size() / 2 - 1] +
                                            passing_ks[passing_ks.size() / 2]));

  json config = config_echo("subinterval", opts.coeffs);
  config["n"] = params.n;
  config["alpha"] = params.alpha;
  config["q"] = params.q;
  config["samples"] = sub.samples;
  config["seed"] = opts.seed;

  json aggregate = {{"passing", passing},
                    {"pass_fraction", static_cast<double>(passing) / static_cast<double>(sub.samples)},
                    {"median_ks_passing", median_ks},
                    {"max_shift_error", max_shift},
                    {"shift_violations", violations},
                    {"gates_all_verified", all_gates}};
  if (params.q < run_needed) aggregate["warning"] = "WindowTooSmall";

  json per_m = json::array();
  for (const auto& r : reports) per_m.push_back(plrs::to_json(r));

  json doc = {{"config", config}, {"aggregate", aggregate}, {"reports", per_m}};
  write_output(opts.out, doc.dump(2));
  return 0;
}

// ------------------------------------------------------------- census ----

struct CensusOpts {
  int z = 0;
  int n_max = 60;
  int verify = 0;
  std::string roots_out;
};

int run_census(const CommonOpts& opts, const CensusOpts& c) {
  plrs::SequenceCache cache(plrs::validate_plrs(opts.coeffs));
  const auto table = plrs::census::h_recurrence(cache, c.z, c.n_max);
  const auto roots = plrs::census::char_poly_roots(cache.plrs(), c.z, &table);

  std::string verify_line;
  if (c.verify > 0) {
    for (int n = 1; n <= std::min(c.verify, c.n_max); ++n) {
      if (table.rows[static_cast<size_t>(n) - 1].h != plrs::census::h_bruteforce(cache, c.z, n))
        throw error(errc::internal_invariant,
                    "recurrence disagrees with brute force at n = " + std::to_string(n));
    }
    verify_line = "verified n <= " + std::to_string(std::min(c.verify, c.n_max)) +
                  " against brute force: OK";
  }

  json roots_json = plrs::to_json(roots);
  if (static_cast<int>(table.rows.size()) - table.base_rows >= 10) {
    const auto decay = plrs::census::decay_report(table, roots);
    roots_json["decay"] = {{"slope", decay.slope},
                           {"predicted_rate", decay.predicted_rate},
                           {"pass", decay.pass}};
  }

  if (opts.format == "json") {
    json rows = json::array();
    for (const auto& row : table.rows) {
      rows.push_back({{"n", row.n},
                      {"H", row.h.str()},
                      {"G", row.g.str()},
                      {"ratio", row.ratio},
                      {"tilde", row.tilde.str()}});
    }
    json config = config_echo("census", opts.coeffs);
    config["Z"] = c.z;
    config["n_max"] = c.n_max;
    json doc = {{"config", config}, {"table", rows}, {"roots", roots_json}};
    if (!verify_line.empty()) doc["verify"] = verify_line;
    write_output(opts.out, doc.dump(2));
  } else {
    std::ostringstream body;
    body << "# plrslab v" << kVersion << " census --coeffs " << coeffs_csv(opts.coeffs)
         << " --Z " << c.z << " --n " << c.n_max << "\n";
    body << plrs::census_to_csv(table);
    write_output(opts.out, body.str());
    const std::string roots_payload = roots_json.dump(2);
    if (!c.roots_out.empty()) {
      write_output(c.roots_out, roots_payload);
    } else if (!opts.out.empty()) {
      std::cout << roots_payload << "\n";
    } else {
      std::cout << "\n" << roots_payload << "\n";
    }
    if (!verify_line.empty()) std::cout << verify_line << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized Zeckendorf decompositions over positive linear recurrences"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOpts seq_opts;
  int seq_n = 10;
  CLI::App* seq = app.add_subcommand("seq", "print sequence terms G_1..G_n");
  add_common(seq, seq_opts);
  seq->add_option("--n", seq_n, "number of terms")->required();

  CommonOpts dec_opts;
  dec_opts.format = "text";
  std::string dec_number;
  CLI::App* dec = app.add_subcommand("decompose", "decompose an integer");
  add_common(dec, dec_opts, false);
  dec->add_option("--format", dec_opts.format, "text|json")->check(CLI::IsMember({"text", "json"}));
  dec->add_option("number", dec_number, "non-negative integer (decimal)")->required();

  CommonOpts dist_opts;
  DistOpts dist_sub;
  CLI::App* dist = app.add_subcommand("dist", "summand-count distributions");
  add_common(dist, dist_opts);
  dist->add_option("--upto-index", dist_sub.upto_index, "exact distribution over [0, G_k)");
  dist->add_option("--lo", dist_sub.lo, "interval start");
  dist->add_option("--len", dist_sub.len, "interval length");
  dist->add_option("--counterexample-n", dist_sub.counterexample_n,
                   "canned non-Gaussian interval at scale n");
  dist->add_option("--mode", dist_sub.mode, "exhaustive|sample")
      ->check(CLI::IsMember({"exhaustive", "sample"}));
  dist->add_option("--samples", dist_sub.samples, "sample count in sample mode");

  CommonOpts sub_opts;
  sub_opts.format = "json";
  SubOpts sub_sub;
  CLI::App* sub = app.add_subcommand("subinterval", "sampled subinterval experiments");
  add_common(sub, sub_opts, false);
  sub->add_option("--n", sub_sub.n, "ambient scale")->required();
  sub->add_option("--alpha", sub_sub.alpha, "subinterval scale (default n/2)");
  sub->add_option("--q", sub_sub.q, "buffer width (default cube-root rule)");
  sub->add_option("--samples", sub_sub.samples, "number of m samples");
  sub->add_option("--walk-budget", sub_sub.walk_budget, "max exhaustive walk length");
  sub->add_option("--walk-samples", sub_sub.walk_samples, "points per sampled walk");

  CommonOpts cen_opts;
  CensusOpts cen_sub;
  CLI::App* cen = app.add_subcommand("census", "gap census H_n and growth-rate report");
  add_common(cen, cen_opts);
  cen->add_option("--Z", cen_sub.z, "gap threshold (> L)")->required();
  cen->add_option("--n", cen_sub.n_max, "table length");
  cen->add_option("--verify", cen_sub.verify, "cross-check n <= K against brute force");
  cen->add_option("--roots-out", cen_sub.roots_out, "write the root report JSON here");

  try {
    app.parse(argc, argv);
    if (seq->parsed()) return run_seq(seq_opts, seq_n);
    if (dec->parsed()) return run_decompose(dec_opts, dec_number);
    if (dist->parsed()) return run_dist(dist_opts, dist_sub);
    if (sub->parsed()) return run_subinterval(sub_opts, sub_sub);
    if (cen->parsed()) return run_census(cen_opts, cen_sub);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
