#pragma once

#include <cstdint>
#include <vector>

#include "kloo/cyclotomic.hpp"
#include "kloo/modfield.hpp"

namespace kloo {

/// Coherence budget between the cosine path and the embedding of the exact
/// value: |approx - Re(embed(exact))| < kEmbedTolPerP * p.
inline constexpr double kEmbedTolPerP = 1e-9;

/// A Kloosterman sum K(p; a, b) = sum over x = 1..p-1 of zeta^(a*x + b*xbar)
/// in two views: `exact` in Z[zeta_p] and `approx` in double precision.
/// For the classical sum (power r = 1) approx comes from an independent
/// cosine accumulation, so comparing it with the embedding of `exact`
/// cross-checks two routes; for the generalized sums with r >= 2, which may
/// be complex, approx is the real part of the embedding.
struct KloostermanValue {
  PrimeModulus modulus;
  uint32_t a = 0;
  uint32_t b = 0;
  CyclotomicInt exact;
  double approx = 0.0;
};

/// Occurrence counts of the exponents (a*x + b*xbar) mod p over x = 1..p-1,
/// before the canonical reduction; entries sum to p-1.
std::vector<int64_t> exponent_histogram(const PrimeModulus& m, uint32_t a, uint32_t b);

/// K(p; a, b), exact histogram plus float view, O(p). Inputs are reduced
/// mod p. When exactly one of a, b is divisible by p the sum degenerates to
/// the Ramanujan-type value -1 and is computed, not rejected; a == b == 0
/// (mod p) is rejected.
KloostermanValue kloosterman_exact(const PrimeModulus& m, int64_t a, int64_t b);

/// Direct double-precision value of K(p; a, b). The sum is real, so only
/// cosines are accumulated, pairing x with xbar in a fixed order.
double kloosterman_float(const PrimeModulus& m, int64_t a, int64_t b);

/// Generalized sum K_r(p; a, b) = sum of zeta^(a*x^r + b*xbar). Requires
/// r >= 1 and p not dividing a*b; r = 1 agrees exactly with
/// kloosterman_exact. For r >= 2 the value may be complex.
KloostermanValue kloosterman_r_exact(const PrimeModulus& m, uint32_t r, int64_t a, int64_t b);

/// All K(1, t) for t = 1..p-1 (entry t-1 holds K(1, t)) in one O(p^2) pass
/// over a precomputed cosine table.
std::vector<double> batch_kloosterman(const PrimeModulus& m);

/// cos(2*pi*k/p) for k = 0..p-1; shared by the batch pass and the float
/// verification routes.
std::vector<double> cosine_table(uint32_t p);

/// counts[l] = number of z in 1..p-2 with inv(z+1) - inv(z) == l (mod p).
/// Every entry is 0, 1 or 2; the entries sum to p-2 and counts[0] is
/// structurally unused (the difference is never 0).
struct LambdaTable {
  PrimeModulus modulus;
  std::vector<int32_t> counts;  // indexed by l, size p
};

/// The counts by direct enumeration of z, O(p).
LambdaTable lambda_brute(const PrimeModulus& m);

/// Closed form of the same count: 1 + legendre(l^2 - 4l, p). Requires
/// 1 <= l <= p-1.
int lambda_formula(const PrimeModulus& m, uint32_t l);

}  // namespace kloo
