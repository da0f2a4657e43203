#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace kloo {

/// Raised when a modulus fails validation; code() separates "not prime"
/// from the explicitly unsupported p = 2.
class ModulusError : public std::invalid_argument {
public:
  enum class Code { NotPrime, TwoUnsupported };

  ModulusError(Code code, const std::string& what)
      : std::invalid_argument(what), code_(code) {}

  Code code() const noexcept { return code_; }

private:
  Code code_;
};

/// A validated odd prime p (3 <= p <= 2^31 - 1) together with an optional
/// shared table of modular inverses. Immutable once built; copies share the
/// table, so passing PrimeModulus by value is cheap and thread-safe.
class PrimeModulus {
public:
  uint32_t p() const noexcept { return p_; }

  bool has_inverse_table() const noexcept { return table_ != nullptr; }

  /// x_bar with x * x_bar == 1 (mod p). Table lookup when available,
  /// extended Euclid otherwise. Throws std::invalid_argument for x == 0 (mod p).
  uint32_t inverse(uint32_t x) const;

  friend bool operator==(const PrimeModulus& lhs, const PrimeModulus& rhs) noexcept {
    return lhs.p_ == rhs.p_;
  }

  friend PrimeModulus make_modulus(int64_t n, bool build_inverse_table);

private:
  PrimeModulus(uint32_t p, std::shared_ptr<const std::vector<uint32_t>> table)
      : p_(p), table_(std::move(table)) {}

  uint32_t p_;
  std::shared_ptr<const std::vector<uint32_t>> table_;
};

/// Validates n and returns it as a PrimeModulus. The inverse table is
/// precomputed in O(p) via the recurrence inv(x) = -(p/x) * inv(p mod x);
/// pass build_inverse_table = false for table-free contexts (inverses then
/// fall back to extended Euclid).
///
/// Rejects n = 2 (ModulusError::Code::TwoUnsupported), any other non-prime
/// (ModulusError::Code::NotPrime) and n > 2^31 - 1 (std::out_of_range; the
/// cap keeps residue products inside 64-bit intermediates).
PrimeModulus make_modulus(int64_t n, bool build_inverse_table = true);

/// Deterministic Miller-Rabin; exact for every 64-bit n.
bool is_prime(uint64_t n);

/// Inverse of x modulo m.p(); x is reduced mod p, x == 0 (mod p) rejected.
uint32_t mod_inverse(uint32_t x, const PrimeModulus& m);

/// Table-free modular inverse via extended Euclid.
uint32_t inverse_euclid(uint32_t x, uint32_t p);

/// base^exp mod p by square-and-multiply, O(log exp) multiplications.
uint32_t mod_pow(uint32_t base, uint64_t exp, const PrimeModulus& m);

/// Legendre symbol (a/p) by the Euler criterion a^((p-1)/2): 0 when p | a,
/// +1 for nonzero quadratic residues, -1 for non-residues. a may be any
/// integer; it is reduced mod p first.
int legendre(int64_t a, const PrimeModulus& m);

}  // namespace kloo
