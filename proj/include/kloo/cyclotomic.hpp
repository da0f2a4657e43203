#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "kloo/modfield.hpp"

namespace kloo {

// Exact element of Z[zeta_p], zeta_p a primitive p-th root of unity, stored
// as a length-p vector of 64-bit coefficients of zeta^0 .. zeta^(p-1). The
// representation works modulo (zeta^p - 1) plus the single linear relation
// 1 + zeta + ... + zeta^(p-1) = 0, so multiplication is a plain cyclic
// convolution. Canonical form forces coeffs[p-1] = 0 (subtract the last
// coefficient from every entry); two elements are equal iff their canonical
// vectors are identical. Every operation returns a canonical value, and all
// coefficient arithmetic is overflow-checked (std::overflow_error).
class CyclotomicInt {
public:
  /// The zero element of Z[zeta_p].
  explicit CyclotomicInt(PrimeModulus m);

  /// The rational integer n embedded as n * zeta^0.
  static CyclotomicInt from_int(int64_t n, PrimeModulus m);

  /// The basis element zeta^k, 0 <= k <= p-1 (canonicalized for k = p-1).
  static CyclotomicInt basis(uint32_t k, PrimeModulus m);

  /// Element with the given coefficient vector (length p, any representative);
  /// the result is canonicalized.
  static CyclotomicInt from_coeffs(PrimeModulus m, std::vector<int64_t> raw);

  const PrimeModulus& modulus() const noexcept { return modulus_; }
  uint32_t p() const noexcept { return modulus_.p(); }

  /// Canonical coefficients: size p, back() == 0.
  const std::vector<int64_t>& coeffs() const noexcept { return coeffs_; }

  CyclotomicInt operator+(const CyclotomicInt& rhs) const;
  CyclotomicInt operator-(const CyclotomicInt& rhs) const;
  CyclotomicInt operator-() const;

  /// Cyclic convolution of length p, O(p^2) schoolbook, then canonical
  /// reduction. Intermediate overflow raises std::overflow_error.
  CyclotomicInt operator*(const CyclotomicInt& rhs) const;

  /// Every coefficient multiplied by n.
  CyclotomicInt scaled(int64_t n) const;

  /// Complex conjugation zeta^k -> zeta^(p-k); an involution.
  CyclotomicInt conjugate() const;

  /// Numerical embedding zeta_p -> exp(2*pi*i/p), in double precision.
  std::complex<double> to_complex() const;

  bool is_zero() const noexcept;

  /// True iff the element equals its own conjugate; such elements embed to
  /// real numbers.
  bool is_conjugation_invariant() const;

  bool operator==(const CyclotomicInt& rhs) const noexcept {
    return modulus_.p() == rhs.modulus_.p() && coeffs_ == rhs.coeffs_;
  }
  bool operator!=(const CyclotomicInt& rhs) const noexcept { return !(*this == rhs); }

  /// Debug serialization: JSON array of the p canonical coefficients,
  /// e.g. "[2,0,1,1,0]".
  std::string to_json() const;

private:
  CyclotomicInt(PrimeModulus m, std::vector<int64_t> coeffs_any_rep);

  void canonicalize();
  void require_same_modulus(const CyclotomicInt& rhs) const;

  PrimeModulus modulus_;
  std::vector<int64_t> coeffs_;
};

}  // namespace kloo
