#include "kloo/identities.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>
#include <utility>

namespace kloo {
namespace {

constexpr uint32_t kMaxModulus = 2147483647u;

struct ReducedPair {
  uint32_t a;
  uint32_t b;
};

// Every identity and bound here assumes p does not divide a*b.
ReducedPair require_unit_pair(const PrimeModulus& m, int64_t a, int64_t b) {
  const auto p = static_cast<int64_t>(m.p());
  const auto ra = static_cast<uint32_t>(((a % p) + p) % p);
  const auto rb = static_cast<uint32_t>(((b % p) + p) % p);
  if (ra == 0 || rb == 0) {
    throw std::invalid_argument("identity hypotheses violated: p divides a*b");
  }
  return {ra, rb};
}

// Float view of K(a, b) over a shared cosine table; same pairing order as
// kloosterman_float.
double kl_float(const PrimeModulus& m, uint32_t a, uint32_t b,
                const std::vector<double>& costab) {
  const uint32_t p = m.p();
  double s = 0.0;
  for (uint32_t x = 1; x < p; ++x) {
    const uint32_t xi = m.inverse(x);
    if (xi < x) continue;
    s += costab[(uint64_t{a} * x + uint64_t{b} * xi) % p];
    if (xi != x) s += costab[(uint64_t{a} * xi + uint64_t{b} * x) % p];
  }
  return s;
}

std::string fmt10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

using Clock = std::chrono::steady_clock;

std::chrono::duration<double> since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0);
}

}  // namespace

const char* to_string(CheckName name) {
  switch (name) {
    case CheckName::SqIdentity: return "sq_identity";
    case CheckName::YDecomposition: return "Y_decomposition";
    case CheckName::SumOverL: return "sum_over_l";
    case CheckName::SecondMoment: return "second_moment";
    case CheckName::Bounds: return "bounds";
  }
  return "?";
}

const char* to_string(CheckMode mode) {
  return mode == CheckMode::Exact ? "exact" : "float";
}

double BoundReport::worst_ratio() const {
  return std::max({weil_ratio, kloos_ratio, corollary_ratio});
}

IdentityReport verify_identity_sq(const PrimeModulus& m, int64_t a, int64_t b,
                                  CheckMode mode) {
  const auto [ra, rb] = require_unit_pair(m, a, b);
  const auto t0 = Clock::now();
  const uint32_t p = m.p();

  std::optional<bool> exact_pass;
  if (mode == CheckMode::Exact) {
    const auto k = kloosterman_exact(m, ra, rb);
    CyclotomicInt residual = k.exact * k.exact - CyclotomicInt::from_int(p, m);
    // The sum runs to l = p inclusive; the last term pairs the degenerate
    // K(a, 0) = -1 with a vanishing Legendre factor.
    for (uint32_t l = 1; l <= p; ++l) {
      const auto lb = static_cast<uint32_t>(uint64_t{l} * rb % p);
      const int chi = legendre(int64_t{l} * l - 4 * int64_t{l}, m);
      const auto kl = kloosterman_exact(m, ra, lb);
      residual = residual - kl.exact.scaled(chi);
    }
    exact_pass = residual.is_zero();
  }

  const auto tab = cosine_table(p);
  const double lhs = kl_float(m, ra, rb, tab);
  double rhs = static_cast<double>(p);
  for (uint32_t l = 1; l <= p; ++l) {
    const auto lb = static_cast<uint32_t>(uint64_t{l} * rb % p);
    const int chi = legendre(int64_t{l} * l - 4 * int64_t{l}, m);
    rhs += chi * kl_float(m, ra, lb, tab);
  }
  const double residual_f = std::abs(lhs * lhs - rhs);

  return {p, ra, rb, CheckName::SqIdentity, exact_pass, residual_f, since(t0)};
}

IdentityReport verify_y_decomposition(const PrimeModulus& m, int64_t a, int64_t b,
                                      CheckMode mode) {
  const auto [ra, rb] = require_unit_pair(m, a, b);
  const auto t0 = Clock::now();
  const uint32_t p = m.p();

  // Y(a, b) as the verbatim double sum over h = 1..p-1 and y with p not
  // dividing y + h, accumulated as an exponent histogram.
  std::vector<int64_t> yhist(p, 0);
  for (uint32_t h = 1; h < p; ++h) {
    for (uint32_t y = 1; y < p; ++y) {
      if (y + h == p) continue;
      const uint32_t s = (y + h) % p;
      const uint32_t d = (m.inverse(s) + p - m.inverse(y)) % p;
      ++yhist[(uint64_t{ra} * h + uint64_t{rb} * d) % p];
    }
  }

  const auto tab = cosine_table(p);
  double y_float = 0.0;
  for (uint32_t e = 0; e < p; ++e) {
    if (yhist[e] != 0) y_float += static_cast<double>(yhist[e]) * tab[e];
  }
  const double kf = kl_float(m, ra, rb, tab);
  const double residual_f = std::abs(kf * kf - static_cast<double>(p - 1) - y_float);

  std::optional<bool> exact_pass;
  if (mode == CheckMode::Exact) {
    const auto y_direct = CyclotomicInt::from_coeffs(m, std::move(yhist));
    const auto k = kloosterman_exact(m, ra, rb);
    const auto residual =
        k.exact * k.exact - CyclotomicInt::from_int(int64_t{p} - 1, m) - y_direct;
    const bool decomposition_holds = residual.is_zero();

    // Cross-check: the same Y as sum over l of lambda_l * K(a, lb), with
    // lambda by brute enumeration.
    const auto lambda = lambda_brute(m);
    CyclotomicInt y_lambda(m);
    for (uint32_t l = 1; l < p; ++l) {
      const auto lb = static_cast<uint32_t>(uint64_t{l} * rb % p);
      const auto kl = kloosterman_exact(m, ra, lb);
      y_lambda = y_lambda + kl.exact.scaled(lambda.counts[l]);
    }
    exact_pass = decomposition_holds && y_direct == y_lambda;
  }

  return {p, ra, rb, CheckName::YDecomposition, exact_pass, residual_f, since(t0)};
}

IdentityReport verify_sum_over_l(const PrimeModulus& m, int64_t a, int64_t b,
                                 CheckMode mode) {
  const auto [ra, rb] = require_unit_pair(m, a, b);
  const auto t0 = Clock::now();
  const uint32_t p = m.p();

  std::optional<bool> exact_pass;
  if (mode == CheckMode::Exact) {
    CyclotomicInt sum(m);
    for (uint32_t l = 1; l < p; ++l) {
      const auto lb = static_cast<uint32_t>(uint64_t{l} * rb % p);
      sum = sum + kloosterman_exact(m, ra, lb).exact;
    }
    exact_pass = (sum - CyclotomicInt::from_int(1, m)).is_zero();
  }

  const auto tab = cosine_table(p);
  double total = 0.0;
  for (uint32_t l = 1; l < p; ++l) {
    const auto lb = static_cast<uint32_t>(uint64_t{l} * rb % p);
    total += kl_float(m, ra, lb, tab);
  }
  const double residual_f = std::abs(total - 1.0);

  return {p, ra, rb, CheckName::SumOverL, exact_pass, residual_f, since(t0)};
}

IdentityReport verify_second_moment(const PrimeModulus& m, int64_t a, int64_t b,
                                    CheckMode mode) {
  const auto [ra, rb] = require_unit_pair(m, a, b);
  const auto t0 = Clock::now();
  const uint32_t p = m.p();
  const auto target = int64_t{p} * (int64_t{p} - 1);

  std::optional<bool> exact_pass;
  if (mode == CheckMode::Exact) {
    CyclotomicInt sum(m);
    // l runs to p: the l = p term is the degenerate K(a, 0) = -1, whose
    // square contributes 1.
    for (uint32_t l = 1; l <= p; ++l) {
      const auto lb = static_cast<uint32_t>(uint64_t{l} * rb % p);
      const auto kl = kloosterman_exact(m, ra, lb);
      sum = sum + kl.exact * kl.exact;
    }
    exact_pass = (sum - CyclotomicInt::from_int(target, m)).is_zero();
  }

  const auto tab = cosine_table(p);
  double total = 0.0;
  for (uint32_t l = 1; l <= p; ++l) {
    const auto lb = static_cast<uint32_t>(uint64_t{l} * rb % p);
    const double v = kl_float(m, ra, lb, tab);
    total += v * v;
  }
  const double residual_f = std::abs(total - static_cast<double>(target));

  return {p, ra, rb, CheckName::SecondMoment, exact_pass, residual_f, since(t0)};
}

namespace {

BoundReport measure_bounds(uint32_t p, uint32_t a, uint32_t b, double value) {
  BoundReport r;
  r.p = p;
  r.a = a;
  r.b = b;
  r.abs_value = std::abs(value);
  const auto pd = static_cast<double>(p);
  r.weil_ratio = r.abs_value / (2.0 * std::sqrt(pd));
  r.kloos_ratio = r.abs_value / (std::pow(3.0, 0.25) * std::pow(pd, 0.75));
  r.corollary_ratio = r.abs_value / std::sqrt(pd + std::pow(pd, 1.5));
  return r;
}

}  // namespace

BoundReport check_bounds(const PrimeModulus& m, int64_t a, int64_t b) {
  const auto [ra, rb] = require_unit_pair(m, a, b);
  const auto report = measure_bounds(m.p(), ra, rb, kloosterman_float(m, ra, rb));
  if (!report.within_bounds()) {
    throw CounterexampleError(
        report, "bound ratio " + fmt10(report.worst_ratio()) + " exceeds 1 at p=" +
                    std::to_string(m.p()) + " a=" + std::to_string(ra) +
                    " b=" + std::to_string(rb) + " (implementation bug)");
  }
  return report;
}

// --- scan machinery -------------------------------------------------------

namespace {

std::vector<std::pair<uint32_t, uint32_t>> pairs_for(const ParameterPolicy& policy,
                                                     uint32_t p) {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  switch (policy.kind) {
    case ParameterPolicy::Kind::FixedAAllB:
      out.reserve(p - 1);
      for (uint32_t b = 1; b < p; ++b) out.emplace_back(1, b);
      break;
    case ParameterPolicy::Kind::AllPairs:
      out.reserve(static_cast<size_t>(p - 1) * (p - 1));
      for (uint32_t a = 1; a < p; ++a) {
        for (uint32_t b = 1; b < p; ++b) out.emplace_back(a, b);
      }
      break;
    case ParameterPolicy::Kind::Sampled: {
      // Per-prime stream derived from the scan seed, so results do not
      // depend on which thread handles which prime.
      std::mt19937_64 eng(policy.seed ^ (0x9e3779b97f4a7c15ULL * p));
      out.reserve(policy.samples);
      for (uint32_t i = 0; i < policy.samples; ++i) {
        const auto a = static_cast<uint32_t>(1 + eng() % (p - 1));
        const auto b = static_cast<uint32_t>(1 + eng() % (p - 1));
        out.emplace_back(a, b);
      }
      break;
    }
  }
  return out;
}

struct PrimePartial {
  ScanReport::Totals totals;
  std::optional<ExtremeEntry> worst_weil;
  std::optional<ExtremeEntry> worst_kloos;
  std::optional<ExtremeEntry> worst_corollary;
  std::optional<ExtremeEntry> worst_kr;
  std::optional<ResidualEntry> worst_residual;
  std::vector<Counterexample> counterexamples;
  std::vector<CheckRow> rows;
};

void update_max(std::optional<ExtremeEntry>& slot, double value, uint32_t p,
                uint32_t a, uint32_t b) {
  if (!slot || value > slot->value) slot = ExtremeEntry{value, p, a, b};
}

std::vector<CheckName> normalize_checks(std::vector<CheckName> checks) {
  if (checks.empty()) throw std::invalid_argument("no checks requested");
  std::sort(checks.begin(), checks.end());
  checks.erase(std::unique(checks.begin(), checks.end()), checks.end());
  return checks;
}

PrimePartial scan_one_prime(uint32_t p, const ScanConfig& config) {
  PrimePartial part;
  const auto m = make_modulus(p);
  const auto pairs = pairs_for(config.policy, p);

  const bool wants_bounds =
      std::find(config.checks.begin(), config.checks.end(), CheckName::Bounds) !=
      config.checks.end();
  // With a fixed at 1 the whole |K(1, .)| row comes out of one batch pass.
  std::vector<double> batch;
  if (wants_bounds && config.policy.kind == ParameterPolicy::Kind::FixedAAllB) {
    batch = batch_kloosterman(m);
  }

  for (const auto& [a, b] : pairs) {
    for (const CheckName check : config.checks) {
      CheckRow row;
      row.p = p;
      row.a = a;
      row.b = b;
      row.check = check;
      bool ok = true;
      std::string detail;

      if (check == CheckName::Bounds) {
        const double value = batch.empty() ? kloosterman_float(m, a, b) : batch[b - 1];
        const auto bounds = measure_bounds(p, a, b, value);
        row.weil_ratio = bounds.weil_ratio;
        row.kloos_ratio = bounds.kloos_ratio;
        row.corollary_ratio = bounds.corollary_ratio;
        update_max(part.worst_weil, bounds.weil_ratio, p, a, b);
        update_max(part.worst_kloos, bounds.kloos_ratio, p, a, b);
        update_max(part.worst_corollary, bounds.corollary_ratio, p, a, b);
        ok = bounds.within_bounds();
        if (!ok) detail = "bound ratio " + fmt10(bounds.worst_ratio()) + " exceeds 1";
      } else {
        IdentityReport rep;
        switch (check) {
          case CheckName::SqIdentity:
            rep = verify_identity_sq(m, a, b, config.mode);
            break;
          case CheckName::YDecomposition:
            rep = verify_y_decomposition(m, a, b, config.mode);
            break;
          case CheckName::SumOverL:
            rep = verify_sum_over_l(m, a, b, config.mode);
            break;
          case CheckName::SecondMoment:
            rep = verify_second_moment(m, a, b, config.mode);
            break;
          default:
            break;
        }
        row.exact_pass = rep.exact_pass;
        row.float_residual = rep.float_residual;
        if (!part.worst_residual || rep.float_residual > part.worst_residual->value) {
          part.worst_residual = ResidualEntry{rep.float_residual, p, a, b, check};
        }
        ok = rep.passed();
        if (!ok) {
          detail = rep.exact_pass && !*rep.exact_pass
                       ? "cyclotomic residual nonzero"
                       : "float residual " + fmt10(rep.float_residual) +
                             " exceeds tolerance " + fmt10(float_tolerance(p));
        }
      }

      ++part.totals.run;
      if (ok) ++part.totals.passed;
      if (config.collect_rows) part.rows.push_back(row);
      if (!ok) {
        part.counterexamples.push_back({p, a, b, check, detail});
        if (!config.keep_going) return part;
      }
    }
  }
  return part;
}

// Runs per_prime over every index, either sequentially or on a small thread
// pool; partials land in index order so the merge is schedule-independent.
template <typename F>
std::vector<PrimePartial> run_over_primes(size_t count, unsigned jobs, bool keep_going,
                                          F&& per_prime) {
  std::vector<PrimePartial> parts(count);
  if (jobs == 0) jobs = std::thread::hardware_concurrency();
  if (jobs == 0) jobs = 1;
  jobs = static_cast<unsigned>(std::min<size_t>(jobs, count));

  if (jobs <= 1) {
    for (size_t i = 0; i < count; ++i) {
      parts[i] = per_prime(i);
      if (!parts[i].counterexamples.empty() && !keep_going) break;
    }
    return parts;
  }

  std::atomic<size_t> next{0};
  std::atomic<bool> stop{false};
  auto worker = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= count) break;
      if (stop.load(std::memory_order_relaxed)) break;
      parts[i] = per_prime(i);
      if (!parts[i].counterexamples.empty() && !keep_going) {
        stop.store(true, std::memory_order_relaxed);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return parts;
}

void merge_partial(ScanReport& report, PrimePartial& part) {
  report.totals.run += part.totals.run;
  report.totals.passed += part.totals.passed;
  auto merge_extreme = [](std::optional<ExtremeEntry>& into,
                          const std::optional<ExtremeEntry>& from) {
    if (from && (!into || from->value > into->value)) into = from;
  };
  merge_extreme(report.worst_weil, part.worst_weil);
  merge_extreme(report.worst_kloos, part.worst_kloos);
  merge_extreme(report.worst_corollary, part.worst_corollary);
  merge_extreme(report.worst_kr_ratio, part.worst_kr);
  if (part.worst_residual &&
      (!report.worst_residual || part.worst_residual->value > report.worst_residual->value)) {
    report.worst_residual = part.worst_residual;
  }
  std::move(part.counterexamples.begin(), part.counterexamples.end(),
            std::back_inserter(report.counterexamples));
  std::move(part.rows.begin(), part.rows.end(), std::back_inserter(report.rows));
}

}  // namespace

std::vector<uint32_t> primes_in_range(uint32_t lo, uint32_t hi) {
  if (lo > hi) throw std::invalid_argument("empty prime range");
  if (hi > kMaxModulus) throw std::out_of_range("prime range exceeds 2^31 - 1");
  std::vector<uint32_t> out;
  uint32_t n = std::max(lo, 3u);
  if (n % 2 == 0) ++n;
  for (; n <= hi; n += 2) {
    if (is_prime(n)) out.push_back(n);
  }
  if (out.empty()) {
    throw std::invalid_argument("no odd primes in range [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
  }
  return out;
}

ScanReport scan_primes(const ScanConfig& config) {
  ScanConfig cfg = config;
  cfg.checks = normalize_checks(cfg.checks);
  if (cfg.policy.kind == ParameterPolicy::Kind::Sampled && cfg.policy.samples == 0) {
    throw std::invalid_argument("sampled policy requires a positive sample count");
  }
  const auto primes = primes_in_range(cfg.lo, cfg.hi);

  auto parts = run_over_primes(primes.size(), cfg.jobs, cfg.keep_going,
                               [&](size_t i) { return scan_one_prime(primes[i], cfg); });

  ScanReport report;
  report.lo = cfg.lo;
  report.hi = cfg.hi;
  report.policy = cfg.policy;
  report.mode = cfg.mode;
  report.checks = cfg.checks;
  for (auto& part : parts) merge_partial(report, part);

  if (cfg.weil_sentinel && report.worst_weil) {
    report.weil_sentinel =
        SentinelResult{*cfg.weil_sentinel, report.worst_weil->value >= *cfg.weil_sentinel};
  }
  return report;
}

ScanReport scan_primes(uint32_t lo, uint32_t hi, ParameterPolicy policy,
                       std::vector<CheckName> checks) {
  ScanConfig config;
  config.lo = lo;
  config.hi = hi;
  config.policy = policy;
  config.checks = std::move(checks);
  return scan_primes(config);
}

ScanReport kr_scan(uint32_t r, uint32_t lo, uint32_t hi, ParameterPolicy policy,
                   unsigned jobs) {
  if (r == 0) throw std::invalid_argument("r must be >= 1");
  if (policy.kind == ParameterPolicy::Kind::Sampled && policy.samples == 0) {
    throw std::invalid_argument("sampled policy requires a positive sample count");
  }
  const auto primes = primes_in_range(lo, hi);

  auto per_prime = [&](size_t i) {
    PrimePartial part;
    const uint32_t p = primes[i];
    const auto m = make_modulus(p);
    const double envelope = std::pow(static_cast<double>(p), 0.75);
    const double trivial = static_cast<double>(p - 1) * (1.0 + kRatioSlack);
    for (const auto& [a, b] : pairs_for(policy, p)) {
      const auto kr = kloosterman_r_exact(m, r, a, b);
      const double mag = std::abs(kr.exact.to_complex());
      update_max(part.worst_kr, mag / envelope, p, a, b);
      ++part.totals.run;
      if (mag <= trivial) {
        ++part.totals.passed;
      } else {
        part.counterexamples.push_back(
            {p, a, b, CheckName::Bounds,
             "trivial bound violated: |K_r| = " + fmt10(mag) + " > p - 1"});
        return part;
      }
    }
    return part;
  };

  auto parts = run_over_primes(primes.size(), jobs, /*keep_going=*/false, per_prime);

  ScanReport report;
  report.lo = lo;
  report.hi = hi;
  report.policy = policy;
  report.mode = CheckMode::Float;
  report.r = r;
  for (auto& part : parts) merge_partial(report, part);
  return report;
}

}  // namespace kloo
