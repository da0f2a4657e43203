#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kloo/klsum.hpp"
#include "kloo/modfield.hpp"

namespace kloo {

/// Float residual budget: a check's residual must stay below
/// kFloatTolPerP * p.
inline constexpr double kFloatTolPerP = 1e-6;

/// Relative slack on bound ratios: each ratio must be <= 1 + kRatioSlack.
inline constexpr double kRatioSlack = 1e-9;

enum class CheckName { SqIdentity, YDecomposition, SumOverL, SecondMoment, Bounds };

enum class CheckMode { Exact, Float };

const char* to_string(CheckName name);
const char* to_string(CheckMode mode);

inline double float_tolerance(uint32_t p) { return kFloatTolPerP * p; }

/// Outcome of one identity check at one (p, a, b). exact_pass is absent for
/// float-only runs; exact_pass == true implies the float residual is inside
/// tolerance too.
struct IdentityReport {
  uint32_t p = 0;
  uint32_t a = 0;
  uint32_t b = 0;
  CheckName check = CheckName::SqIdentity;
  std::optional<bool> exact_pass;
  double float_residual = 0.0;
  std::chrono::duration<double> elapsed{0.0};

  bool passed() const {
    return exact_pass.value_or(true) && float_residual < float_tolerance(p);
  }
};

/// |K| against the three magnitude bounds. Every ratio is nonnegative and
/// must be <= 1 + kRatioSlack; anything larger is a counterexample,
/// i.e. an implementation bug.
struct BoundReport {
  uint32_t p = 0;
  uint32_t a = 0;
  uint32_t b = 0;
  double abs_value = 0.0;
  double weil_ratio = 0.0;       // |K| / (2 sqrt(p))
  double kloos_ratio = 0.0;      // |K| / (3^(1/4) p^(3/4))
  double corollary_ratio = 0.0;  // |K| / sqrt(p + p^(3/2))

  double worst_ratio() const;
  bool within_bounds() const { return worst_ratio() <= 1.0 + kRatioSlack; }
};

/// Thrown by check_bounds when a ratio exceeds 1 + kRatioSlack.
class CounterexampleError : public std::runtime_error {
public:
  CounterexampleError(BoundReport report, const std::string& what)
      : std::runtime_error(what), report_(report) {}
  const BoundReport& report() const noexcept { return report_; }

private:
  BoundReport report_;
};

struct ParameterPolicy {
  enum class Kind { AllPairs, FixedAAllB, Sampled };
  Kind kind = Kind::FixedAAllB;
  uint32_t samples = 0;  // Sampled only
  uint64_t seed = 0;     // Sampled only

  static ParameterPolicy all_pairs() { return {Kind::AllPairs, 0, 0}; }
  static ParameterPolicy fixed_a_all_b() { return {Kind::FixedAAllB, 0, 0}; }
  static ParameterPolicy sampled(uint32_t samples, uint64_t seed) {
    return {Kind::Sampled, samples, seed};
  }
};

struct Counterexample {
  uint32_t p = 0;
  uint32_t a = 0;
  uint32_t b = 0;
  CheckName check = CheckName::SqIdentity;
  std::string detail;
};

/// A maximum together with the parameters that attained it.
struct ExtremeEntry {
  double value = 0.0;
  uint32_t p = 0;
  uint32_t a = 0;
  uint32_t b = 0;
};

struct ResidualEntry {
  double value = 0.0;
  uint32_t p = 0;
  uint32_t a = 0;
  uint32_t b = 0;
  CheckName check = CheckName::SqIdentity;
};

/// One executed check, for the per-row CSV log. Identity rows carry
/// exact_pass / float_residual; bounds rows carry the three ratios.
struct CheckRow {
  uint32_t p = 0;
  uint32_t a = 0;
  uint32_t b = 0;
  CheckName check = CheckName::SqIdentity;
  std::optional<bool> exact_pass;
  std::optional<double> float_residual;
  std::optional<double> weil_ratio;
  std::optional<double> kloos_ratio;
  std::optional<double> corollary_ratio;
};

struct SentinelResult {
  double threshold = 0.0;
  bool passed = false;
};

/// Aggregate over a prime/parameter grid. rows is populated only when the
/// scan is configured to collect per-check rows. On success
/// totals.passed == totals.run and counterexamples is empty.
struct ScanReport {
  uint32_t lo = 0;
  uint32_t hi = 0;
  ParameterPolicy policy;
  CheckMode mode = CheckMode::Exact;
  std::vector<CheckName> checks;
  std::optional<uint32_t> r;  // generalized-sum scans only

  struct Totals {
    uint64_t run = 0;
    uint64_t passed = 0;
  } totals;

  std::optional<ExtremeEntry> worst_weil;
  std::optional<ExtremeEntry> worst_kloos;
  std::optional<ExtremeEntry> worst_corollary;
  std::optional<ExtremeEntry> worst_kr_ratio;  // max |K_r| / p^(3/4), report-only
  std::optional<ResidualEntry> worst_residual;
  std::optional<SentinelResult> weil_sentinel;

  std::vector<Counterexample> counterexamples;
  std::vector<CheckRow> rows;

  bool all_passed() const { return counterexamples.empty(); }
};

struct ScanConfig {
  uint32_t lo = 3;
  uint32_t hi = 3;
  ParameterPolicy policy;
  std::vector<CheckName> checks;  // deduplicated and run in enum order
  CheckMode mode = CheckMode::Exact;
  bool keep_going = false;
  unsigned jobs = 0;  // 0 = hardware concurrency
  bool collect_rows = false;
  std::optional<double> weil_sentinel;  // max weil ratio must reach this
};

// --- single checks ------------------------------------------------------

/// The square identity K(a,b)^2 = p + sum over l = 1..p of
/// legendre(l^2 - 4l) * K(a, lb). The l = p term is evaluated verbatim
/// (its Legendre factor vanishes). Exact mode reports a zero/nonzero
/// cyclotomic residual plus the float residual; float mode reports the
/// float residual only. Requires p not dividing a*b.
IdentityReport verify_identity_sq(const PrimeModulus& m, int64_t a, int64_t b,
                                  CheckMode mode = CheckMode::Exact);

/// K(a,b)^2 = (p-1) + Y(a,b) with Y evaluated as the verbatim double sum
/// over h and y, cross-checked against Y = sum over l of lambda_l * K(a, lb)
/// with brute-force lambda counts. Exact pass requires the residual to
/// vanish and the two Y routes to agree coefficientwise.
IdentityReport verify_y_decomposition(const PrimeModulus& m, int64_t a, int64_t b,
                                      CheckMode mode = CheckMode::Exact);

/// sum over l = 1..p-1 of K(a, lb) = 1, exactly.
IdentityReport verify_sum_over_l(const PrimeModulus& m, int64_t a, int64_t b,
                                 CheckMode mode = CheckMode::Exact);

/// sum over l = 1..p of K(a, lb)^2 = p(p-1), exactly; the l = p term uses
/// the degenerate value K(a, 0) = -1.
IdentityReport verify_second_moment(const PrimeModulus& m, int64_t a, int64_t b,
                                    CheckMode mode = CheckMode::Exact);

/// |K| from the float path against all three bounds. Throws
/// CounterexampleError if any ratio exceeds 1 + kRatioSlack.
BoundReport check_bounds(const PrimeModulus& m, int64_t a, int64_t b);

// --- scans ---------------------------------------------------------------

/// Odd primes in [lo, hi]. Throws std::invalid_argument when lo > hi or the
/// range contains no odd prime.
std::vector<uint32_t> primes_in_range(uint32_t lo, uint32_t hi);

/// Runs the configured checks over every odd prime in [lo, hi] and the
/// (a, b) pairs given by the policy. Parallel over primes; results are
/// merged in prime order, so the report does not depend on the schedule.
/// Stops at the first counterexample unless keep_going is set.
ScanReport scan_primes(const ScanConfig& config);
ScanReport scan_primes(uint32_t lo, uint32_t hi, ParameterPolicy policy,
                       std::vector<CheckName> checks);

/// Reports max |K_r| / p^(3/4) over the scan. No pass/fail threshold is
/// attached to the ratio; the only hard assertion is the trivial bound
/// |K_r| <= p - 1.
ScanReport kr_scan(uint32_t r, uint32_t lo, uint32_t hi, ParameterPolicy policy,
                   unsigned jobs = 0);

}  // namespace kloo
