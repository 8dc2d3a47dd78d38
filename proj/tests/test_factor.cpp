#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wieferich/factor.hpp"

using namespace wieferich;

TEST(Primes, SieveMatchesTrialDivision) {
  auto ps = primes_up_to(5000);
  std::size_t i = 0;
  for (std::uint64_t n = 0; n <= 5000; ++n) {
    bool expected = oracle::is_prime(n);
    bool listed = i < ps.size() && ps[i] == n;
    ASSERT_EQ(listed, expected) << n;
    if (listed) ++i;
  }
}

TEST(Primes, MillerRabin) {
  for (std::uint64_t n = 0; n < 20000; ++n) ASSERT_EQ(is_prime(from_u64(n)), oracle::is_prime(n)) << n;
  EXPECT_TRUE(is_prime(Int("18446744073709551557")));            // largest 64-bit prime
  EXPECT_FALSE(is_prime(Int("3317044064679887385961981")));      // strong pseudoprime to every prime base up to 41
  EXPECT_TRUE(is_prime(Int("170141183460469231731687303715884105727")));  // 2^127 - 1
  EXPECT_FALSE(is_prime(Int("3825123056546413051")));
}

TEST(IntegerFactor, SmallCases) {
  auto f = integer_factor(20);
  ASSERT_TRUE(f.complete());
  ASSERT_EQ(f.factors.size(), 2u);
  EXPECT_EQ(f.factors[0], std::make_pair(Int(2), 2u));
  EXPECT_EQ(f.factors[1], std::make_pair(Int(5), 1u));
  EXPECT_TRUE(integer_factor(1).factors.empty());
  EXPECT_THROW(integer_factor(0), std::invalid_argument);
  EXPECT_THROW(integer_factor(-4), std::invalid_argument);
}

TEST(IntegerFactor, RhoSplitsSemiprimesBeyondTrialDivision) {
  Int p("1000000007"), q("998244353"), r("2147483647");
  Int n = p * p * q * r;
  auto f = integer_factor(n);
  ASSERT_TRUE(f.complete());
  EXPECT_EQ(f.product(), n);
  ASSERT_EQ(f.factors.size(), 3u);
  EXPECT_EQ(f.factors[1], std::make_pair(p, 2u));
}

TEST(IntegerFactor, PerfectPowerCofactor) {
  Int p("1000000007");
  auto f = integer_factor(pow(p, 5));
  ASSERT_TRUE(f.complete());
  ASSERT_EQ(f.factors.size(), 1u);
  EXPECT_EQ(f.factors[0].second, 5u);
}

TEST(IntegerFactor, BudgetExhaustionLeavesCofactor) {
  Int p("1000000000000000003"), q("1000000000000000009");
  FactorBudget tiny{100, 10};
  auto f = integer_factor(6 * p * q, tiny);
  EXPECT_FALSE(f.complete());
  EXPECT_EQ(f.unfactored, p * q);
  EXPECT_EQ(f.product(), 6 * p * q);
  EXPECT_THROW(integer_factor(10, FactorBudget{0, 10}), std::invalid_argument);
}

TEST(IntegerFactor, RandomRemultiplication) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    Int n = from_u64(rng() >> 24) * from_u64((rng() >> 34) + 1);
    auto f = integer_factor(n);
    ASSERT_TRUE(f.complete()) << n;
    ASSERT_EQ(f.product(), n);
    for (const auto& [p, e] : f.factors) ASSERT_TRUE(is_prime(p));
  }
}
