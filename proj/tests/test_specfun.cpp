#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "capflow/errors.hpp"
#include "capflow/specfun.hpp"
#include "oracle/values.inc"
#include "support/property.hpp"

namespace {

using namespace capflow;
using capflow::testing::describe;
using capflow::testing::for_all;
using capflow::testing::Gen;
constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::fabs(a - b) / std::fmax(std::fabs(b), 1e-300); }

TEST(Gamma, ReferenceValues) {
  EXPECT_NEAR(ln_gamma(3.7), kLnGamma_3p7, 1e-14);
  EXPECT_NEAR(ln_gamma(12.25) / kLnGamma_12p25, 1.0, 1e-14);
  EXPECT_NEAR(gamma_fn(0.5), std::sqrt(kPi), 1e-15);
  EXPECT_NEAR(beta_fn(2.5, 1.5) / kBeta_2p5_1p5, 1.0, 1e-14);
}

TEST(IncBeta, ReferenceValues) {
  EXPECT_LT(rel(inc_beta(0.3, 0.5, 1.5), kIncBeta_a), 1e-13);
  EXPECT_LT(rel(inc_beta(0.9, 2.5, 3.5), kIncBeta_b), 1e-13);
  EXPECT_LT(rel(inc_beta(0.999, 1.5, 0.5), kIncBeta_c), 1e-13);
  EXPECT_LT(rel(inc_beta(0.001, 4.0, 2.0), kIncBeta_d), 1e-13);
  EXPECT_LT(rel(inc_beta(0.6, 7.5, 0.5), kIncBeta_e), 1e-13);
}

TEST(IncBeta, ClosedForms) {
  EXPECT_NEAR(inc_beta(0.5, 0.5, 0.5), kPi / 2, 1e-14);
  EXPECT_NEAR(inc_beta(0.5, 0.5, 1.5), kPi / 4 + 0.5, 1e-14);
  EXPECT_NEAR(inc_beta(1.0, 0.5, 1.5), kPi / 2, 1e-14);
  EXPECT_EQ(inc_beta(0.0, 2.0, 3.0), 0.0);
}

TEST(IncBeta, ComplementFormMatches) {
  EXPECT_LT(rel(inc_beta(0.999, 1e-3, 1.5, 0.5), kIncBeta_c), 1e-13);
  // The complement argument carries digits lost in 1 - z.
  const double tiny = 1e-14;
  const double v = inc_beta(1.0 - tiny, tiny, 0.5, 2.0);
  EXPECT_LT(rel(v, beta_fn(0.5, 2.0) - std::pow(tiny, 2.0) / 2.0), 1e-13);
}

TEST(IncBeta, RejectsOutOfRange) {
  EXPECT_THROW(inc_beta(-0.1, 1.0, 1.0), DomainError);
  EXPECT_THROW(inc_beta(1.1, 1.0, 1.0), DomainError);
  EXPECT_THROW(inc_beta(0.5, 0.0, 1.0), DomainError);
}

TEST(IncBetaProperty, ReflectionSumsToCompleteBeta) {
  for_all(11, 400, [](Gen& g) {
    const double z = g.uniform(0.0, 1.0);
    const double a = g.uniform(0.2, 9.0);
    const double b = g.uniform(0.2, 9.0);
    const double lhs = inc_beta(z, a, b) + inc_beta(1.0 - z, b, a);
    return rel(lhs, beta_fn(a, b)) <= 1e-12 ? std::string() : describe({{"z", z}, {"a", a}, {"b", b}});
  });
}

TEST(IncBetaProperty, DerivativeIsIntegrand) {
  for_all(12, 200, [](Gen& g) {
    const double z = g.uniform(0.05, 0.95);
    const double a = g.uniform(0.5, 5.0);
    const double b = g.uniform(0.5, 5.0);
    const double h = 1e-5;
    const double fd = (inc_beta(z + h, a, b) - inc_beta(z - h, a, b)) / (2 * h);
    const double exact = std::pow(z, a - 1) * std::pow(1 - z, b - 1);
    return rel(fd, exact) <= 1e-6 ? std::string() : describe({{"z", z}, {"a", a}, {"b", b}});
  });
}

TEST(IncBetaProperty, MonotoneInZ) {
  for_all(13, 200, [](Gen& g) {
    const double a = g.uniform(0.3, 6.0);
    const double b = g.uniform(0.3, 6.0);
    const double z1 = g.uniform(0.0, 1.0);
    const double z2 = g.uniform(0.0, 1.0);
    const double lo = std::fmin(z1, z2), hi = std::fmax(z1, z2);
    return inc_beta(lo, a, b) <= inc_beta(hi, a, b) ? std::string() : describe({{"lo", lo}, {"hi", hi}});
  });
}

TEST(Hyp2f1Series, ReferenceValues) {
  EXPECT_LT(rel(hyp2f1_series(1, 1, 0.5, 0.25), kHyp2f1_1_1_half_quarter), 1e-14);
  EXPECT_LT(rel(hyp2f1_series(1, 1.5, 0.5, 0.5), kHyp2f1_1_1p5_half_half), 1e-13);
  EXPECT_LT(rel(hyp2f1_series(0.5, 1.5, 2.5, 0.8), kHyp2f1_half_1p5_2p5_0p8), 1e-13);
  EXPECT_NEAR(hyp2f1_series(1, 2, 2, 0.5), 2.0, 1e-14);
  EXPECT_EQ(hyp2f1_series(3, 4, 5, 0.0), 1.0);
}

TEST(Hyp2f1Series, FailsLoudly) {
  EXPECT_THROW(hyp2f1_series(1, 1, 0.5, 1.0), DomainError);
  SeriesOptions few;
  few.max_terms = 5;
  EXPECT_THROW(hyp2f1_series(1, 1, 0.5, 0.99, few), NonConvergenceError);
}

TEST(Hyp2f1Core, MatchesSeriesOnGrid) {
  for (int d : {3, 4, 5, 7, 10}) {
    for (int i = 0; i <= 90; ++i) {
      const double z = 0.01 * i;
      EXPECT_LT(rel(hyp2f1_core(z, d), hyp2f1_series(1, 0.5 * (d - 1), 0.5, z)), 1e-10) << d << ' ' << z;
    }
  }
}

TEST(Hyp2f1Core, StableNearOne) {
  EXPECT_LT(rel(hyp2f1_core(0.999999, 5), kCore_0p999999_d5), 1e-9);
  const double v = hyp2f1_core(1.0 - 1e-12, 10);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GT(v, 0.0);
  EXPECT_THROW(hyp2f1_core(1.0, 3), DomainError);
  EXPECT_THROW(hyp2f1_core(-1e-3, 3), DomainError);
}

TEST(Hyp2f1Core, BetaIdentityGrid) {
  for (double a : {0.5, 1.0, 1.5}) {
    for (double b : {0.5, 1.5, 2.5}) {
      for (int k = 1; k <= 9; ++k) {
        const double z = 0.1 * k;
        const double lhs = hyp2f1_series(1, a + b, a + 1, z);
        const double rhs = a / (std::pow(z, a) * std::pow(1 - z, b)) * inc_beta(z, a, b);
        EXPECT_LT(rel(lhs, rhs), 1e-10) << a << ' ' << b << ' ' << z;
      }
    }
  }
}

}  // namespace
