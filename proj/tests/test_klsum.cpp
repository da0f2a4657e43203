#include "kloo/klsum.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "kloo/identities.hpp"
#include <complex>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

using namespace kloo;

namespace {

std::vector<uint32_t> odd_primes_up_to(uint32_t n) {
  std::vector<uint32_t> out;
  for (uint32_t k = 3; k <= n; k += 2) {
    bool prime = true;
    for (uint32_t d = 3; d * d <= k; d += 2) {
      if (k % d == 0) prime = false;
    }
    if (prime) out.push_back(k);
  }
  return out;
}

uint32_t inverse_by_search(uint32_t x, uint32_t p) {
  for (uint32_t y = 1; y < p; ++y) {
    if (uint64_t{x} * y % p == 1) return y;
  }
  ADD_FAILURE() << "no inverse for " << x << " mod " << p;
  return 0;
}

// Brute-force complex oracle for K(p; a, b), fully independent of the
// library path (search-based inverses, std::polar terms).
std::complex<double> brute_kloosterman(uint32_t p, uint32_t a, uint32_t b) {
  std::complex<double> z{0.0, 0.0};
  const double w = 2.0 * std::numbers::pi / p;
  for (uint32_t x = 1; x < p; ++x) {
    const uint64_t e = (uint64_t{a} * x + uint64_t{b} * inverse_by_search(x, p)) % p;
    z += std::polar(1.0, w * static_cast<double>(e));
  }
  return z;
}

}  // namespace

TEST(KloostermanExact, HistogramAndFloatViewAtFiveOneOne) {
  const auto m = make_modulus(5);
  const auto k = kloosterman_exact(m, 1, 1);
  // Inverses mod 5 pair 1<->1, 2<->3, 4<->4, so the exponents are
  // {2, 0, 0, 3}: histogram [2,0,1,1,0].
  EXPECT_EQ(k.exact.coeffs(), (std::vector<int64_t>{2, 0, 1, 1, 0}));
  const auto oracle = brute_kloosterman(5, 1, 1);
  EXPECT_NEAR(k.approx, oracle.real(), 1e-12);
  EXPECT_NEAR(k.approx, 0.3819660112501051, 1e-12);
  EXPECT_EQ(k.a, 1u);
  EXPECT_EQ(k.b, 1u);
}

TEST(KloostermanExact, SmallestPrime) {
  const auto m = make_modulus(3);
  const auto k = kloosterman_exact(m, 1, 1);
  // x=1 -> exponent 2, x=2 -> exponent 1: zeta + zeta^2 = -1.
  EXPECT_EQ(k.exact, CyclotomicInt::from_int(-1, m));
  EXPECT_NEAR(k.approx, -1.0, 1e-12);
  EXPECT_NEAR(k.approx, 2.0 * std::cos(2.0 * std::numbers::pi * 2.0 / 3.0), 1e-12);
}

TEST(KloostermanFloat, HandComputableAndBruteForce) {
  const auto m3 = make_modulus(3);
  // (p=3, a=1, b=2): x=1 -> 1+2 = 0 (mod 3), x=2 -> 2+2*2 = 0 (mod 3), so
  // both terms are 1.
  EXPECT_NEAR(kloosterman_float(m3, 1, 2), 2.0, 1e-12);

  const auto m7 = make_modulus(7);
  EXPECT_NEAR(kloosterman_float(m7, 1, 1), brute_kloosterman(7, 1, 1).real(), 1e-12);

  // Parameters reduce mod p (including negatives).
  EXPECT_NEAR(kloosterman_float(m7, 8, -6), kloosterman_float(m7, 1, 1), 1e-12);
}

TEST(KloostermanDegenerate, RamanujanValueMinusOne) {
  const auto m = make_modulus(5);
  for (const auto& [a, b] : std::vector<std::pair<int64_t, int64_t>>{{2, 0}, {0, 3}, {5, 4}}) {
    const auto k = kloosterman_exact(m, a, b);
    EXPECT_EQ(k.exact, CyclotomicInt::from_int(-1, m)) << "a=" << a << " b=" << b;
    EXPECT_NEAR(k.approx, -1.0, 1e-12);
  }
  EXPECT_THROW(kloosterman_exact(m, 0, 0), std::invalid_argument);
  EXPECT_THROW(kloosterman_exact(m, 5, 10), std::invalid_argument);
  EXPECT_THROW(kloosterman_float(m, 0, 0), std::invalid_argument);
}

TEST(KloostermanInvariants, RealValuedExactAndCoherentViews) {
  for (const uint32_t p : odd_primes_up_to(31)) {
    const auto m = make_modulus(p);
    for (uint32_t a = 1; a < p; ++a) {
      for (uint32_t b = 1; b < p; ++b) {
        const auto k = kloosterman_exact(m, a, b);
        EXPECT_TRUE(k.exact.is_conjugation_invariant()) << "p=" << p;
        const auto z = k.exact.to_complex();
        EXPECT_LT(std::abs(k.approx - z.real()), kEmbedTolPerP * p);
        EXPECT_LT(std::abs(z.imag()), kEmbedTolPerP * p);
      }
    }
  }
}

TEST(KloostermanInvariants, HistogramMassIsPMinusOne) {
  std::mt19937 rng(77);
  for (const uint32_t p : odd_primes_up_to(101)) {
    const auto m = make_modulus(p);
    std::uniform_int_distribution<uint32_t> residue(1, p - 1);
    for (int i = 0; i < 5; ++i) {
      const uint32_t a = residue(rng), b = residue(rng);
      const auto hist = exponent_histogram(m, a, b);
      EXPECT_EQ(std::accumulate(hist.begin(), hist.end(), int64_t{0}), int64_t{p} - 1);
      // The canonicalized histogram is exactly the stored exact value.
      EXPECT_EQ(CyclotomicInt::from_coeffs(m, hist), kloosterman_exact(m, a, b).exact);
    }
  }
}

TEST(KloostermanR, PowerOneCoincidesWithClassicalSum) {
  const auto m = make_modulus(5);
  const auto k1 = kloosterman_r_exact(m, 1, 1, 1);
  const auto k = kloosterman_exact(m, 1, 1);
  EXPECT_EQ(k1.exact, k.exact);
  EXPECT_EQ(k1.approx, k.approx);
}

TEST(KloostermanR, SquareExponentHistogram) {
  const auto m = make_modulus(5);
  const auto k2 = kloosterman_r_exact(m, 2, 1, 1);
  // Exponents x^2 + xbar: {1+1, 4+3, 4+2, 1+4} = {2, 2, 1, 0}.
  EXPECT_EQ(k2.exact.coeffs(), (std::vector<int64_t>{1, 1, 2, 0, 0}));
  EXPECT_NEAR(k2.approx, k2.exact.to_complex().real(), 1e-12);
}

TEST(KloostermanR, ErrorsAndTrivialBound) {
  const auto m = make_modulus(7);
  EXPECT_THROW(kloosterman_r_exact(m, 0, 1, 1), std::invalid_argument);
  EXPECT_THROW(kloosterman_r_exact(m, 2, 7, 1), std::invalid_argument);
  EXPECT_THROW(kloosterman_r_exact(m, 2, 1, 0), std::invalid_argument);
  // For r >= 2 the value may be complex; only |K_r| <= p-1 is guaranteed.
  for (uint32_t r = 2; r <= 5; ++r) {
    for (uint32_t b = 1; b < 7; ++b) {
      const auto kr = kloosterman_r_exact(m, r, 1, b);
      EXPECT_LE(std::abs(kr.exact.to_complex()), 6.0 * (1.0 + 1e-9));
    }
  }
}

TEST(BatchKloosterman, MatchesPerEntryEvaluation) {
  const auto m = make_modulus(5);
  const auto batch = batch_kloosterman(m);
  ASSERT_EQ(batch.size(), 4u);
  EXPECT_NEAR(batch[0], 0.3819660113, 1e-9);
  for (uint32_t t = 1; t < 5; ++t) {
    EXPECT_NEAR(batch[t - 1], brute_kloosterman(5, 1, t).real(), 1e-12) << "t=" << t;
    EXPECT_NEAR(batch[t - 1], kloosterman_float(m, 1, t), 1e-9) << "t=" << t;
  }
}

TEST(BatchKloosterman, ParameterReductionToFixedA) {
  // K(a, b) = K(1, a*b): substituting x -> a^{-1} x permutes the summands.
  const auto m11 = make_modulus(11);
  const auto batch11 = batch_kloosterman(m11);
  EXPECT_NEAR(kloosterman_float(m11, 3, 4), batch11[(3 * 4) % 11 - 1], 1e-6 * 11);

  for (const uint32_t p : odd_primes_up_to(31)) {
    const auto m = make_modulus(p);
    const auto batch = batch_kloosterman(m);
    for (uint32_t a = 1; a < p; ++a) {
      for (uint32_t b = 1; b < p; ++b) {
        const auto t = static_cast<uint32_t>(uint64_t{a} * b % p);
        EXPECT_NEAR(kloosterman_float(m, a, b), batch[t - 1], kFloatTolPerP * p);
      }
    }
  }
}

TEST(BatchKloosterman, RowSumIsOne) {
  for (const uint32_t p : odd_primes_up_to(499)) {
    const auto m = make_modulus(p);
    const auto batch = batch_kloosterman(m);
    const double total = std::accumulate(batch.begin(), batch.end(), 0.0);
    EXPECT_NEAR(total, 1.0, kFloatTolPerP * p) << "p=" << p;
  }
}

TEST(LambdaBrute, SmallTablesByHand) {
  const auto m5 = make_modulus(5);
  const auto t5 = lambda_brute(m5);
  // z=1: inv(2)-inv(1) = 3-1 = 2; z=2: inv(3)-inv(2) = 2-3 = 4; z=3:
  // inv(4)-inv(3) = 4-2 = 2.
  EXPECT_EQ(t5.counts, (std::vector<int32_t>{0, 0, 2, 0, 1}));

  const auto m3 = make_modulus(3);
  const auto t3 = lambda_brute(m3);
  EXPECT_EQ(t3.counts, (std::vector<int32_t>{0, 1, 0}));
}

TEST(LambdaFormula, SpotChecks) {
  const auto m = make_modulus(5);
  EXPECT_EQ(lambda_formula(m, 4), 1);  // discriminant l^2-4l vanishes at l = 4
  EXPECT_EQ(lambda_formula(m, 2), 2);
  EXPECT_EQ(lambda_formula(m, 1), 0);
  EXPECT_THROW(lambda_formula(m, 0), std::invalid_argument);
  EXPECT_THROW(lambda_formula(m, 5), std::invalid_argument);
}

TEST(LambdaFormula, AgreesWithBruteCountEverywhere) {
  for (const uint32_t p : odd_primes_up_to(499)) {
    const auto m = make_modulus(p);
    const auto table = lambda_brute(m);
    int64_t mass = 0;
    int64_t legendre_sum = 0;
    for (uint32_t l = 1; l < p; ++l) {
      const int formula = lambda_formula(m, l);
      EXPECT_GE(table.counts[l], 0);
      EXPECT_LE(table.counts[l], 2);
      EXPECT_EQ(table.counts[l], formula) << "p=" << p << " l=" << l;
      mass += table.counts[l];
      legendre_sum += formula - 1;
    }
    EXPECT_EQ(table.counts[0], 0);
    EXPECT_EQ(mass, int64_t{p} - 2);
    EXPECT_EQ(legendre_sum, -1);  // sum of legendre(l^2-4l) over l
  }
}
