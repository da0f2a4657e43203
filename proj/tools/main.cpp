#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kloo/identities.hpp"
#include "kloo/klsum.hpp"
#include "kloo/reports.hpp"

namespace {

using namespace kloo;

// Exit codes: 0 = success, 1 = a mathematical check failed (counterexample,
// which means an implementation bug), 2 = usage/configuration error.

struct ComputeOpts {
  int64_t p = 0;
  int64_t a = 0;
  int64_t b = 0;
  uint32_t r = 1;
  bool exact = false;
  bool degenerate = false;
};

struct VerifyOpts {
  uint32_t from = 3;
  uint32_t to = 3;
  std::vector<std::string> checks{"sq", "y", "suml", "moment", "bounds"};
  std::string mode = "exact";
  std::string policy = "fixed";
  uint32_t samples = 16;
  uint64_t seed = 0;
  std::string format = "human";
  std::string out;
  unsigned jobs = 0;
  bool keep_going = false;
  double sentinel = 0.9;
  bool sentinel_set = false;
};

struct BatchOpts {
  int64_t p = 0;
  bool angles = false;
  std::string out;
};

struct KrOpts {
  uint32_t r = 1;
  uint32_t from = 3;
  uint32_t to = 3;
  std::string policy = "fixed";
  uint32_t samples = 16;
  uint64_t seed = 0;
  unsigned jobs = 0;
};

int write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) {
    std::cerr << "cannot open output file: " << out_path << "\n";
    return 2;
  }
  file << text;
  return 0;
}

int run_compute(const ComputeOpts& opts) {
  const auto m = make_modulus(opts.p);
  const auto p = static_cast<int64_t>(m.p());
  const auto ra = ((opts.a % p) + p) % p;
  const auto rb = ((opts.b % p) + p) % p;
  if ((ra == 0 || rb == 0) && !opts.degenerate) {
    std::cerr << "p divides a*b; pass --degenerate to evaluate the degenerate sum\n";
    return 2;
  }

  if (opts.r == 1) {
    const auto k = kloosterman_exact(m, ra, rb);
    std::cout << format_sig10(k.approx) << "\n";
    if (opts.exact) std::cout << k.exact.to_json() << "\n";
  } else {
    // K_r may be complex for r >= 2: print real and imaginary parts.
    const auto k = kloosterman_r_exact(m, opts.r, ra, rb);
    const auto z = k.exact.to_complex();
    std::cout << format_sig10(z.real()) << " " << format_sig10(z.imag()) << "\n";
    if (opts.exact) std::cout << k.exact.to_json() << "\n";
  }
  return 0;
}

int parse_policy(const std::string& token, uint32_t samples, uint64_t seed,
                 ParameterPolicy& out) {
  const auto kind = policy_kind_from_string(token);
  if (!kind) {
    std::cerr << "unknown policy: " << token << " (expected fixed, all or sampled)\n";
    return 2;
  }
  out.kind = *kind;
  if (*kind == ParameterPolicy::Kind::Sampled) {
    out.samples = samples;
    out.seed = seed;
  }
  return 0;
}

int run_verify(const VerifyOpts& opts) {
  ScanConfig config;
  config.lo = opts.from;
  config.hi = opts.to;
  for (const auto& token : opts.checks) {
    const auto check = check_from_token(token);
    if (!check) {
      std::cerr << "unknown check: " << token
                << " (expected sq, y, suml, moment or bounds)\n";
      return 2;
    }
    config.checks.push_back(*check);
  }
  if (opts.mode == "exact") {
    config.mode = CheckMode::Exact;
  } else if (opts.mode == "float") {
    config.mode = CheckMode::Float;
  } else {
    std::cerr << "unknown mode: " << opts.mode << " (expected exact or float)\n";
    return 2;
  }
  if (int rc = parse_policy(opts.policy, opts.samples, opts.seed, config.policy)) return rc;
  if (opts.format != "human" && opts.format != "json" && opts.format != "csv") {
    std::cerr << "unknown format: " << opts.format << " (expected human, json or csv)\n";
    return 2;
  }
  config.jobs = opts.jobs;
  config.keep_going = opts.keep_going;
  config.collect_rows = opts.format == "csv";
  if (opts.sentinel_set) config.weil_sentinel = opts.sentinel;

  const auto report = scan_primes(config);
  std::string text;
  if (opts.format == "json") {
    text = to_json(report);
  } else if (opts.format == "csv") {
    text = to_csv(report);
  } else {
    text = to_human(report);
  }
  if (int rc = write_output(text, opts.out)) return rc;

  const bool sentinel_failed = report.weil_sentinel && !report.weil_sentinel->passed;
  return report.all_passed() && !sentinel_failed ? 0 : 1;
}

int run_batch(const BatchOpts& opts) {
  const auto m = make_modulus(opts.p);
  const auto values = batch_kloosterman(m);
  const double two_sqrt_p = 2.0 * std::sqrt(static_cast<double>(m.p()));

  std::string text = opts.angles ? "t,K,angle\n" : "t,K\n";
  for (uint32_t t = 1; t < m.p(); ++t) {
    const double v = values[t - 1];
    text += std::to_string(t);
    text += ',';
    text += format_sig10(v);
    if (opts.angles) {
      const double theta = std::acos(std::clamp(v / two_sqrt_p, -1.0, 1.0));
      text += ',';
      text += format_sig10(theta);
    }
    text += '\n';
  }
  return write_output(text, opts.out);
}

int run_kr(const KrOpts& opts) {
  ParameterPolicy policy;
  if (int rc = parse_policy(opts.policy, opts.samples, opts.seed, policy)) return rc;

  std::cout << "K_r ratio scan: r=" << opts.r << ", primes " << opts.from << ".."
            << opts.to << ", policy " << to_string(policy.kind) << "\n";
  std::cout << "decade        primes   max |K_r|/p^(3/4)   at (p,a,b)\n";

  std::optional<ExtremeEntry> overall;
  uint64_t run = 0, passed = 0;
  std::vector<Counterexample> counterexamples;

  for (uint64_t decade_lo = 1; decade_lo <= opts.to; decade_lo *= 10) {
    const auto lo = static_cast<uint32_t>(std::max<uint64_t>(decade_lo, opts.from));
    const auto hi = static_cast<uint32_t>(std::min<uint64_t>(decade_lo * 10 - 1, opts.to));
    if (lo > hi) continue;

    size_t prime_count = 0;
    try {
      prime_count = primes_in_range(lo, hi).size();
    } catch (const std::invalid_argument&) {
      continue;  // no odd primes in this slice
    }
    const auto report = kr_scan(opts.r, lo, hi, policy, opts.jobs);
    run += report.totals.run;
    passed += report.totals.passed;
    counterexamples.insert(counterexamples.end(), report.counterexamples.begin(),
                           report.counterexamples.end());

    char decade_label[32];
    std::snprintf(decade_label, sizeof decade_label, "%u..%u", lo, hi);
    std::printf("%-13s %6zu   %-19s (%u,%u,%u)\n", decade_label, prime_count,
                report.worst_kr_ratio ? format_sig10(report.worst_kr_ratio->value).c_str()
                                      : "-",
                report.worst_kr_ratio ? report.worst_kr_ratio->p : 0,
                report.worst_kr_ratio ? report.worst_kr_ratio->a : 0,
                report.worst_kr_ratio ? report.worst_kr_ratio->b : 0);
    if (report.worst_kr_ratio &&
        (!overall || report.worst_kr_ratio->value > overall->value)) {
      overall = report.worst_kr_ratio;
    }
  }

  if (overall) {
    std::cout << "overall max: " << format_sig10(overall->value) << " at (p=" << overall->p
              << ", a=" << overall->a << ", b=" << overall->b << ")\n";
  }
  std::cout << "trivial bound |K_r| <= p-1: " << (counterexamples.empty() ? "ok" : "VIOLATED")
            << " (" << passed << "/" << run << ")\n";
  for (const auto& cx : counterexamples) {
    std::cerr << "counterexample: p=" << cx.p << " a=" << cx.a << " b=" << cx.b << " "
              << cx.detail << "\n";
  }
  return counterexamples.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kloosterman sums over prime fields: exact cyclotomic and floating-point "
               "computation, identity verification, bound scans"};
  app.require_subcommand(1);

  ComputeOpts copts;
  auto* compute = app.add_subcommand("compute", "compute one sum K(p; a, b) or K_r(p; a, b)");
  compute->add_option("-p", copts.p, "odd prime modulus")->required();
  compute->add_option("-a", copts.a, "first parameter")->required();
  compute->add_option("-b", copts.b, "second parameter")->required();
  compute->add_option("-r", copts.r, "power of x in the exponent (default 1)");
  compute->add_flag("--exact", copts.exact, "also print the canonical coefficient vector");
  compute->add_flag("--degenerate", copts.degenerate,
                    "allow exactly one of a, b to vanish mod p (value -1)");

  VerifyOpts vopts;
  auto* verify = app.add_subcommand("verify", "run identity and bound checks over a prime range");
  verify->add_option("--from", vopts.from, "lower end of the prime range")->required();
  verify->add_option("--to", vopts.to, "upper end of the prime range")->required();
  verify->add_option("--checks", vopts.checks, "comma list: sq,y,suml,moment,bounds")
      ->delimiter(',');
  verify->add_option("--mode", vopts.mode, "exact or float (default exact)");
  verify->add_option("--policy", vopts.policy, "fixed, all or sampled (default fixed)");
  verify->add_option("--samples", vopts.samples, "pairs per prime for --policy sampled");
  verify->add_option("--seed", vopts.seed, "seed for --policy sampled");
  verify->add_option("--format", vopts.format, "human, json or csv (default human)");
  verify->add_option("--out", vopts.out, "output file (default stdout)");
  verify->add_option("--jobs", vopts.jobs, "worker threads (default: hardware concurrency)");
  verify->add_flag("--keep-going", vopts.keep_going,
                   "collect all counterexamples instead of stopping at the first");
  auto* sentinel_opt = verify->add_option(
      "--weil-sentinel", vopts.sentinel,
      "require the max weil_ratio to reach this value (sharpness guard)");

  BatchOpts bopts;
  auto* batch = app.add_subcommand("batch", "CSV of K(1, t) for t = 1..p-1");
  batch->add_option("-p", bopts.p, "odd prime modulus")->required();
  batch->add_flag("--angles", bopts.angles, "add the angle column arccos(K / (2 sqrt(p)))");
  batch->add_option("--out", bopts.out, "output file (default stdout)");

  KrOpts kopts;
  auto* kr = app.add_subcommand("kr", "report max |K_r| / p^(3/4) per prime decade");
  kr->add_option("-r", kopts.r, "power of x in the exponent")->required();
  kr->add_option("--from", kopts.from, "lower end of the prime range")->required();
  kr->add_option("--to", kopts.to, "upper end of the prime range")->required();
  kr->add_option("--policy", kopts.policy, "fixed, all or sampled (default fixed)");
  kr->add_option("--samples", kopts.samples, "pairs per prime for --policy sampled");
  kr->add_option("--seed", kopts.seed, "seed for --policy sampled");
  kr->add_option("--jobs", kopts.jobs, "worker threads (default: hardware concurrency)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  vopts.sentinel_set = sentinel_opt->count() > 0;

  try {
    if (compute->parsed()) return run_compute(copts);
    if (verify->parsed()) return run_verify(vopts);
    if (batch->parsed()) return run_batch(bopts);
    if (kr->parsed()) return run_kr(kopts);
  } catch (const CounterexampleError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::bad_alloc&) {
    std::cerr << "out of memory\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 2;
}
