#include "kloo/cyclotomic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace kloo {
namespace {

int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("cyclotomic coefficient overflow in addition");
  }
  return r;
}

int64_t checked_sub(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) {
    throw std::overflow_error("cyclotomic coefficient overflow in subtraction");
  }
  return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("cyclotomic coefficient overflow in multiplication");
  }
  return r;
}

}  // namespace

CyclotomicInt::CyclotomicInt(PrimeModulus m)
    : modulus_(std::move(m)), coeffs_(modulus_.p(), 0) {}

CyclotomicInt::CyclotomicInt(PrimeModulus m, std::vector<int64_t> coeffs_any_rep)
    : modulus_(std::move(m)), coeffs_(std::move(coeffs_any_rep)) {
  canonicalize();
}

CyclotomicInt CyclotomicInt::from_int(int64_t n, PrimeModulus m) {
  CyclotomicInt x(std::move(m));
  x.coeffs_[0] = n;
  return x;
}

CyclotomicInt CyclotomicInt::basis(uint32_t k, PrimeModulus m) {
  if (k >= m.p()) throw std::invalid_argument("basis exponent out of range");
  CyclotomicInt x(std::move(m));
  x.coeffs_[k] = 1;
  x.canonicalize();
  return x;
}

CyclotomicInt CyclotomicInt::from_coeffs(PrimeModulus m, std::vector<int64_t> raw) {
  if (raw.size() != m.p()) {
    throw std::invalid_argument("coefficient vector length must equal p");
  }
  return CyclotomicInt(std::move(m), std::move(raw));
}

void CyclotomicInt::canonicalize() {
  const int64_t last = coeffs_.back();
  if (last == 0) return;
  // zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2)): subtracting the last
  // coefficient from every entry zeroes it without changing the value.
  for (auto& c : coeffs_) c = checked_sub(c, last);
}

void CyclotomicInt::require_same_modulus(const CyclotomicInt& rhs) const {
  if (modulus_.p() != rhs.modulus_.p()) {
    throw std::invalid_argument("cyclotomic modulus mismatch");
  }
}

CyclotomicInt CyclotomicInt::operator+(const CyclotomicInt& rhs) const {
  require_same_modulus(rhs);
  CyclotomicInt out(modulus_);
  for (size_t k = 0; k < coeffs_.size(); ++k) {
    out.coeffs_[k] = checked_add(coeffs_[k], rhs.coeffs_[k]);
  }
  return out;  // sums of canonical vectors stay canonical
}

CyclotomicInt CyclotomicInt::operator-(const CyclotomicInt& rhs) const {
  require_same_modulus(rhs);
  CyclotomicInt out(modulus_);
  for (size_t k = 0; k < coeffs_.size(); ++k) {
    out.coeffs_[k] = checked_sub(coeffs_[k], rhs.coeffs_[k]);
  }
  return out;
}

CyclotomicInt CyclotomicInt::operator-() const { return scaled(-1); }

CyclotomicInt CyclotomicInt::scaled(int64_t n) const {
  CyclotomicInt out(modulus_);
  for (size_t k = 0; k < coeffs_.size(); ++k) {
    out.coeffs_[k] = checked_mul(coeffs_[k], n);
  }
  return out;
}

CyclotomicInt CyclotomicInt::operator*(const CyclotomicInt& rhs) const {
  require_same_modulus(rhs);
  const uint32_t n = p();
  std::vector<int64_t> out(n, 0);
  for (uint32_t i = 0; i < n; ++i) {
    const int64_t xi = coeffs_[i];
    if (xi == 0) continue;
    uint32_t k = i;  // k tracks (i + j) mod n without a division
    for (uint32_t j = 0; j < n; ++j) {
      const int64_t yj = rhs.coeffs_[j];
      if (yj != 0) out[k] = checked_add(out[k], checked_mul(xi, yj));
      if (++k == n) k = 0;
    }
  }
  return CyclotomicInt(modulus_, std::move(out));
}

CyclotomicInt CyclotomicInt::conjugate() const {
  const uint32_t n = p();
  std::vector<int64_t> out(n, 0);
  out[0] = coeffs_[0];
  for (uint32_t k = 1; k < n; ++k) out[n - k] = coeffs_[k];
  return CyclotomicInt(modulus_, std::move(out));
}

std::complex<double> CyclotomicInt::to_complex() const {
  const double step = 2.0 * std::numbers::pi / static_cast<double>(p());
  double re = 0.0, im = 0.0;
  for (size_t k = 0; k < coeffs_.size(); ++k) {
    const auto c = static_cast<double>(coeffs_[k]);
    if (c == 0.0) continue;
    const double angle = step * static_cast<double>(k);
    re += c * std::cos(angle);
    im += c * std::sin(angle);
  }
  return {re, im};
}

bool CyclotomicInt::is_zero() const noexcept {
  for (const auto c : coeffs_) {
    if (c != 0) return false;
  }
  return true;
}

bool CyclotomicInt::is_conjugation_invariant() const { return *this == conjugate(); }

std::string CyclotomicInt::to_json() const {
  std::string out = "[";
  for (size_t k = 0; k < coeffs_.size(); ++k) {
    if (k > 0) out += ',';
    out += std::to_string(coeffs_[k]);
  }
  out += ']';
  return out;
}

}  // namespace kloo
