#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "wieferich/verify.hpp"

using namespace wieferich;

namespace {
const FieldSpec Zi = FieldSpec::imaginary_quadratic(1);
const FieldSpec Qrat = FieldSpec::rational();
QuadInt gi(long x, long y) { return QuadInt(Zi, x, y); }
}  // namespace

TEST(UpperNormBound, Examples) {
  auto rep = check_upper_norm_bound(gi(2, 1), 60);
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.cases, 60u);
  // |Nm(a^2 - 1)| = 20 <= 4 * 25
  EXPECT_EQ(abs_norm(power(gi(2, 1), 2) - 1), 20);
  auto one = check_upper_norm_bound(gi(1, 0), 5);
  EXPECT_TRUE(one.pass());
  EXPECT_FALSE(one.skipped.empty());
  EXPECT_THROW(check_upper_norm_bound(gi(0, 0), 5), std::invalid_argument);
}

TEST(LowerPhiBound, Examples) {
  EXPECT_EQ(abs_norm(cyclotomic_eval(4, gi(2, 1))), 32);
  EXPECT_TRUE(check_lower_phi_bound(gi(2, 1), 60).pass());
  EXPECT_TRUE(check_lower_phi_bound(QuadInt(Qrat, 2), 60).pass());
  EXPECT_THROW(check_lower_phi_bound(gi(1, 1), 10), IneligibleBase);
}

TEST(Sandwich, DirectedRoundingEnclosesDoubleEvaluation) {
  for (Rational b : {Rational(2), Rational(5, 2), Rational(10)}) {
    auto rep = check_sandwich(b, 200);
    EXPECT_TRUE(rep.pass()) << b.get_str();
    ASSERT_TRUE(rep.min_margin.has_value());
    EXPECT_GT(*rep.min_margin, 0.0);
  }
  // n = 2, b = 2: log(3/4) - log(1/2) = log(3/2), so the slack is log 2 - log(3/2)
  auto iv = detail::sandwich_at(Rational(2), 2, 128);
  EXPECT_TRUE(iv.certified);
  EXPECT_NEAR(iv.lo_margin, std::log(2.0) - std::log(1.5), 1e-12);
  EXPECT_THROW(check_sandwich(Rational(3, 2), 5), std::invalid_argument);
}

TEST(Chen, PairwiseCoprime) {
  EXPECT_TRUE(check_chen_pairwise(gi(2, 1), 30).pass());
  EXPECT_TRUE(check_chen_pairwise(QuadInt(Qrat, 2), 40).pass());
}

TEST(LevelChecks, SquarefreePartAndOrders) {
  LevelFactorizer levels(gi(1, 2), {});
  EXPECT_TRUE(check_squarefree_part_nonwieferich(levels, 24).pass());
  EXPECT_TRUE(check_order_lemmas(levels, 24).pass());
  EXPECT_TRUE(check_first_occurrence_norms(levels, 24).pass());
}

TEST(Trend, RatiosAddUp) {
  TrendReport t = bound_trend_report(gi(2, 1), 30);
  ASSERT_EQ(t.levels.size(), 30u);
  for (const auto& p : t.levels) {
    EXPECT_NEAR(p.c_ratio + p.d_ratio, p.total_ratio, 1e-12) << p.n;
    EXPECT_GE(p.d_ratio, 0.0);
  }
  EXPECT_EQ(t.levels[0].d_ratio, 0.0);  // a - 1 = 1 + i generates a prime
  EXPECT_LE(t.last_quartile_max_d_ratio, 0.5);
  EXPECT_THROW(bound_trend_report(gi(0, 1), 5), IneligibleBase);
}

TEST(Quality, Examples) {
  QuadInt a = gi(2, 1);
  QualityReport q = abc_quality(power(a, 2) - 1, -power(a, 2));
  EXPECT_EQ(q.max_norm, 25);
  EXPECT_EQ(q.rad_norm_alpha, 10);
  EXPECT_EQ(q.rad_norm_beta, 5);
  EXPECT_NEAR(q.quality, std::log(25.0) / std::log(50.0), 1e-12);
  QualityReport r = abc_quality(QuadInt(Qrat, 8), QuadInt(Qrat, -9));
  EXPECT_NEAR(r.quality, std::log(9.0) / std::log(6.0), 1e-12);
  EXPECT_THROW(abc_quality(gi(1, 0), gi(-1, 0)), std::invalid_argument);
}

TEST(Quality, SymmetricAndUnitInvariant) {
  QuadInt a = gi(3, 2);
  QuadInt alpha = power(a, 3) - 1, beta = -power(a, 3);
  double q = abc_quality(alpha, beta).quality;
  EXPECT_DOUBLE_EQ(abc_quality(beta, alpha).quality, q);
  EXPECT_DOUBLE_EQ(abc_quality(alpha * gi(0, 1), beta * gi(0, 1)).quality, q);
}

TEST(Exceptions, PerField) {
  auto groups = exception_set({1, 5});
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].elements.size(), 9u);
  EXPECT_EQ(groups[1].elements.size(), 3u);
  for (const auto& g : exception_set(squarefree_up_to(12))) {
    std::set<std::string> shown;
    for (const auto& a : g.elements) {
      EXPECT_LE(norm(a), 3);
      shown.insert(display_element(a));
    }
    for (const auto& a : g.elements) {
      EXPECT_TRUE(shown.count(display_element(-a)));
      EXPECT_TRUE(shown.count(display_element(conjugate(a))));
    }
  }
}
