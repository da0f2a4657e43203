#include "kloo/klsum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace kloo {
namespace {

struct ReducedPair {
  uint32_t a;
  uint32_t b;
};

ReducedPair reduce_pair(const PrimeModulus& m, int64_t a, int64_t b) {
  const auto p = static_cast<int64_t>(m.p());
  const auto ra = static_cast<uint32_t>(((a % p) + p) % p);
  const auto rb = static_cast<uint32_t>(((b % p) + p) % p);
  if (ra == 0 && rb == 0) {
    throw std::invalid_argument("a == 0 and b == 0 (mod p): the sum degenerates to p-1");
  }
  return {ra, rb};
}

// Exponent (a*x + b*xbar) mod p; all operands below 2^31, so the products
// fit in 64 bits.
uint32_t exponent_at(const PrimeModulus& m, uint32_t a, uint32_t b, uint32_t x) {
  const uint64_t e = uint64_t{a} * x + uint64_t{b} * m.inverse(x);
  return static_cast<uint32_t>(e % m.p());
}

double float_sum(const PrimeModulus& m, uint32_t a, uint32_t b) {
  const uint32_t p = m.p();
  const double step = 2.0 * std::numbers::pi / static_cast<double>(p);
  double s = 0.0;
  // Imaginary parts cancel (x -> -x negates the exponent), so accumulate
  // cosines only, processing each pair {x, xbar} when its smaller member
  // comes up.
  for (uint32_t x = 1; x < p; ++x) {
    const uint32_t xi = m.inverse(x);
    if (xi < x) continue;
    s += std::cos(step * exponent_at(m, a, b, x));
    if (xi != x) s += std::cos(step * exponent_at(m, a, b, xi));
  }
  return s;
}

}  // namespace

std::vector<int64_t> exponent_histogram(const PrimeModulus& m, uint32_t a, uint32_t b) {
  const uint32_t p = m.p();
  std::vector<int64_t> hist(p, 0);
  for (uint32_t x = 1; x < p; ++x) ++hist[exponent_at(m, a, b, x)];
  return hist;
}

KloostermanValue kloosterman_exact(const PrimeModulus& m, int64_t a, int64_t b) {
  const auto [ra, rb] = reduce_pair(m, a, b);
  auto exact = CyclotomicInt::from_coeffs(m, exponent_histogram(m, ra, rb));
  const double approx = float_sum(m, ra, rb);
  return {m, ra, rb, std::move(exact), approx};
}

double kloosterman_float(const PrimeModulus& m, int64_t a, int64_t b) {
  const auto [ra, rb] = reduce_pair(m, a, b);
  return float_sum(m, ra, rb);
}

KloostermanValue kloosterman_r_exact(const PrimeModulus& m, uint32_t r, int64_t a, int64_t b) {
  if (r == 0) throw std::invalid_argument("r must be >= 1");
  const auto [ra, rb] = reduce_pair(m, a, b);
  if (ra == 0 || rb == 0) {
    throw std::invalid_argument("K_r requires a and b nonzero mod p");
  }
  if (r == 1) return kloosterman_exact(m, ra, rb);

  const uint32_t p = m.p();
  std::vector<int64_t> hist(p, 0);
  for (uint32_t x = 1; x < p; ++x) {
    const uint64_t e = uint64_t{ra} * mod_pow(x, r, m) + uint64_t{rb} * m.inverse(x);
    ++hist[e % p];
  }
  auto exact = CyclotomicInt::from_coeffs(m, std::move(hist));
  // No independent real route exists for r >= 2 (the value may be complex);
  // approx is the real part of the embedding.
  const double approx = exact.to_complex().real();
  return {m, ra, rb, std::move(exact), approx};
}

std::vector<double> cosine_table(uint32_t p) {
  std::vector<double> table(p);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(p);
  for (uint32_t k = 0; k < p; ++k) table[k] = std::cos(step * k);
  return table;
}

std::vector<double> batch_kloosterman(const PrimeModulus& m) {
  const uint32_t p = m.p();
  const auto table = cosine_table(p);
  std::vector<double> out(p - 1, 0.0);
  for (uint32_t t = 1; t < p; ++t) {
    double s = 0.0;
    for (uint32_t x = 1; x < p; ++x) {
      const uint64_t e = x + uint64_t{t} * m.inverse(x);
      s += table[e % p];
    }
    out[t - 1] = s;
  }
  return out;
}

LambdaTable lambda_brute(const PrimeModulus& m) {
  const uint32_t p = m.p();
  std::vector<int32_t> counts(p, 0);
  for (uint32_t z = 1; z + 1 < p; ++z) {
    const uint32_t l = (m.inverse(z + 1) + p - m.inverse(z)) % p;
    ++counts[l];
  }
  return {m, std::move(counts)};
}

int lambda_formula(const PrimeModulus& m, uint32_t l) {
  if (l == 0 || l >= m.p()) throw std::invalid_argument("l must be in 1..p-1");
  const auto ll = static_cast<int64_t>(l);
  return 1 + legendre(ll * ll - 4 * ll, m);
}

}  // namespace kloo
