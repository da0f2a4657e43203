#include "kloo/modfield.hpp"

#include <gtest/gtest.h>

#include <set>
#include <vector>

using namespace kloo;

namespace {

std::vector<uint32_t> odd_primes_up_to(uint32_t n) {
  std::vector<uint32_t> out;
  for (uint32_t k = 3; k <= n; k += 2) {
    bool prime = true;
    for (uint32_t d = 3; d * d <= k; d += 2) {
      if (k % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(k);
  }
  return out;
}

// Independent Legendre oracle: enumerate the set of nonzero squares mod p.
int legendre_by_enumeration(uint32_t a, uint32_t p) {
  a %= p;
  if (a == 0) return 0;
  std::set<uint32_t> squares;
  for (uint64_t x = 1; x < p; ++x) squares.insert(static_cast<uint32_t>(x * x % p));
  return squares.count(a) ? 1 : -1;
}

}  // namespace

TEST(MakeModulus, BuildsInverseTableForFive) {
  const auto m = make_modulus(5);
  EXPECT_EQ(m.p(), 5u);
  ASSERT_TRUE(m.has_inverse_table());
  // Entry x holds xbar: [_,1,3,2,4].
  EXPECT_EQ(m.inverse(1), 1u);
  EXPECT_EQ(m.inverse(2), 3u);
  EXPECT_EQ(m.inverse(3), 2u);
  EXPECT_EQ(m.inverse(4), 4u);
  for (uint32_t x = 1; x < 5; ++x) {
    EXPECT_EQ(uint64_t{x} * m.inverse(x) % 5, 1u);
  }
}

TEST(MakeModulus, RejectsNonPrimesWithDistinctCodes) {
  try {
    make_modulus(4);
    FAIL() << "4 accepted";
  } catch (const ModulusError& e) {
    EXPECT_EQ(e.code(), ModulusError::Code::NotPrime);
    EXPECT_STREQ(e.what(), "4 is not an odd prime");
  }
  try {
    make_modulus(2);
    FAIL() << "2 accepted";
  } catch (const ModulusError& e) {
    EXPECT_EQ(e.code(), ModulusError::Code::TwoUnsupported);
  }
  EXPECT_THROW(make_modulus(0), ModulusError);
  EXPECT_THROW(make_modulus(1), ModulusError);
  EXPECT_THROW(make_modulus(-7), ModulusError);
  EXPECT_THROW(make_modulus(9), ModulusError);
  EXPECT_THROW(make_modulus(561), ModulusError);  // Carmichael number
}

TEST(MakeModulus, CapAtThirtyOneBits) {
  // 2^31 - 1 is prime and sits exactly at the cap; skip the table (8 GiB).
  const auto m = make_modulus(2147483647, /*build_inverse_table=*/false);
  EXPECT_FALSE(m.has_inverse_table());
  EXPECT_EQ(uint64_t{12345} * m.inverse(12345) % 2147483647u, 1u);
  EXPECT_THROW(make_modulus(int64_t{1} << 31), std::out_of_range);
  EXPECT_THROW(make_modulus((int64_t{1} << 32) + 15), std::out_of_range);
}

TEST(IsPrime, SpotChecks) {
  EXPECT_FALSE(is_prime(0));
  EXPECT_FALSE(is_prime(1));
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(3));
  EXPECT_TRUE(is_prime(2147483647ull));
  EXPECT_FALSE(is_prime(2147483645ull));
  EXPECT_FALSE(is_prime(561));            // Carmichael
  EXPECT_FALSE(is_prime(3215031751ull));  // strong pseudoprime to bases 2,3,5,7
  EXPECT_TRUE(is_prime(18446744073709551557ull));  // largest 64-bit prime
}

TEST(ModInverse, MatchesExhaustiveSearch) {
  const auto m5 = make_modulus(5);
  const auto m7 = make_modulus(7);
  EXPECT_EQ(mod_inverse(2, m5), 3u);
  EXPECT_EQ(mod_inverse(1, m7), 1u);
  // Oracle for (3, 7): the unique y with 3y = 1 (mod 7).
  uint32_t expected = 0;
  for (uint32_t y = 1; y < 7; ++y) {
    if (3 * y % 7 == 1) expected = y;
  }
  EXPECT_EQ(expected, 5u);
  EXPECT_EQ(mod_inverse(3, m7), expected);
  EXPECT_THROW(mod_inverse(0, m7), std::invalid_argument);
  EXPECT_THROW(mod_inverse(7, m7), std::invalid_argument);
}

TEST(ModInverse, InvolutionAndEuclidAgreement) {
  const auto m = make_modulus(101);
  for (uint32_t x = 1; x < 101; ++x) {
    EXPECT_EQ(mod_inverse(mod_inverse(x, m), m), x);
    EXPECT_EQ(inverse_euclid(x, 101), mod_inverse(x, m));
  }
}

TEST(ModPow, SpotChecksAndOracle) {
  const auto m5 = make_modulus(5);
  const auto m7 = make_modulus(7);
  EXPECT_EQ(mod_pow(2, 0, m7), 1u);  // empty product
  EXPECT_EQ(mod_pow(3, 3, m5), 2u);  // 27 mod 5
  EXPECT_EQ(mod_pow(2, 2, m5), 4u);  // 2 is a non-residue mod 5: 2^((p-1)/2) = -1
  const auto m97 = make_modulus(97);
  for (uint32_t base : {0u, 1u, 5u, 50u, 96u}) {
    uint64_t acc = 1;
    for (uint32_t e = 0; e <= 20; ++e) {
      EXPECT_EQ(mod_pow(base, e, m97), acc) << "base=" << base << " e=" << e;
      acc = acc * base % 97;
    }
  }
}

TEST(Legendre, SpotChecks) {
  const auto m7 = make_modulus(7);
  const auto m5 = make_modulus(5);
  EXPECT_EQ(legendre(1, m7), 1);
  EXPECT_EQ(legendre(0, m7), 0);
  // Squares mod 5 are {1, 4}; 2 is not one of them.
  EXPECT_EQ(legendre_by_enumeration(2, 5), -1);
  EXPECT_EQ(legendre(2, m5), -1);
  // Negative and large inputs reduce mod p first.
  EXPECT_EQ(legendre(-3, m7), legendre(4, m7));
  EXPECT_EQ(legendre(7 * 1000 + 2, m7), legendre(2, m7));
}

TEST(Legendre, AgreesWithEnumerationEverywhere) {
  for (const uint32_t p : odd_primes_up_to(101)) {
    const auto m = make_modulus(p);
    for (uint32_t a = 0; a < p; ++a) {
      EXPECT_EQ(legendre(a, m), legendre_by_enumeration(a, p)) << "p=" << p << " a=" << a;
    }
  }
}

TEST(Legendre, MultiplicativeAndBalanced) {
  for (const uint32_t p : odd_primes_up_to(101)) {
    const auto m = make_modulus(p);
    int plus = 0, minus = 0;
    for (uint32_t a = 1; a < p; ++a) {
      (legendre(a, m) == 1 ? plus : minus)++;
      for (uint32_t b = 1; b < p; ++b) {
        EXPECT_EQ(legendre(int64_t{a} * b, m), legendre(a, m) * legendre(b, m));
      }
    }
    EXPECT_EQ(plus, static_cast<int>((p - 1) / 2));
    EXPECT_EQ(minus, static_cast<int>((p - 1) / 2));
  }
}
