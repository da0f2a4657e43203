#include "kloo/modfield.hpp"

#include <initializer_list>

namespace kloo {
namespace {

constexpr int64_t kMaxModulus = (int64_t{1} << 31) - 1;

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t acc = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) acc = mul_mod(acc, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return acc;
}

std::shared_ptr<const std::vector<uint32_t>> build_inverse_table(uint32_t p) {
  std::vector<uint32_t> table(p, 0);
  table[1] = 1;
  for (uint32_t x = 2; x < p; ++x) {
    // inv(x) = -(p/x) * inv(p mod x); every factor stays below p < 2^31,
    // so the product fits in 64 bits and is never divisible by p.
    table[x] = static_cast<uint32_t>(p - (uint64_t{p / x} * table[p % x]) % p);
  }
  return std::make_shared<const std::vector<uint32_t>>(std::move(table));
}

}  // namespace

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This base set decides primality for every 64-bit integer.
  for (uint64_t base : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = pow_mod(base, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

PrimeModulus make_modulus(int64_t n, bool build_inverse_table_flag) {
  if (n == 2) {
    throw ModulusError(ModulusError::Code::TwoUnsupported,
                       "p = 2 is unsupported; the modulus must be an odd prime");
  }
  if (n > kMaxModulus) {
    throw std::out_of_range("modulus " + std::to_string(n) + " exceeds 2^31 - 1");
  }
  if (n < 3 || !is_prime(static_cast<uint64_t>(n))) {
    throw ModulusError(ModulusError::Code::NotPrime,
                       std::to_string(n) + " is not an odd prime");
  }
  const auto p = static_cast<uint32_t>(n);
  return PrimeModulus(p, build_inverse_table_flag ? build_inverse_table(p) : nullptr);
}

uint32_t PrimeModulus::inverse(uint32_t x) const {
  x %= p_;
  if (x == 0) throw std::invalid_argument("zero has no inverse");
  if (table_) return (*table_)[x];
  return inverse_euclid(x, p_);
}

uint32_t mod_inverse(uint32_t x, const PrimeModulus& m) { return m.inverse(x); }

uint32_t inverse_euclid(uint32_t x, uint32_t p) {
  x %= p;
  if (x == 0) throw std::invalid_argument("zero has no inverse");
  int64_t r0 = p, r1 = x;
  int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    const int64_t q = r0 / r1;
    r0 -= q * r1;
    std::swap(r0, r1);
    t0 -= q * t1;
    std::swap(t0, t1);
  }
  if (t0 < 0) t0 += p;
  return static_cast<uint32_t>(t0);
}

uint32_t mod_pow(uint32_t base, uint64_t exp, const PrimeModulus& m) {
  return static_cast<uint32_t>(pow_mod(base, exp, m.p()));
}

int legendre(int64_t a, const PrimeModulus& m) {
  const auto p = static_cast<int64_t>(m.p());
  const auto r = static_cast<uint32_t>(((a % p) + p) % p);
  if (r == 0) return 0;
  const uint32_t e = mod_pow(r, (m.p() - 1) / 2, m);
  return e == 1 ? 1 : -1;
}

}  // namespace kloo
