#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "capflow/equilibrium.hpp"
#include "capflow/errors.hpp"
#include "capflow/functional.hpp"
#include "capflow/specfun.hpp"
#include "oracle/values.inc"
#include "support/property.hpp"

namespace {

using namespace capflow;
using capflow::testing::describe;
using capflow::testing::for_all;
using capflow::testing::Gen;
constexpr double kPi = std::numbers::pi;

TEST(Functional, ReferenceValues) {
  const QuadratureConfig quad;
  EXPECT_NEAR(f_functional_generic(3, kPi / 2, ZeroField{}, quad), 1.0 / (0.5 + 1.0 / kPi), 1e-13);
  EXPECT_NEAR(f_functional_generic(5, 1.0, ZeroField{}, quad) / kFfuncZero_d5_1, 1.0, 1e-13);
  EXPECT_NEAR(f_functional_point_charge(3, kPi / 2, 1.0) / kFfuncPc_d3_q1_halfpi, 1.0, 1e-13);
  EXPECT_NEAR(f_functional_generic(3, kPi / 2, make_point_charge(1.0), quad) / kFfuncPc_d3_q1_halfpi, 1.0, 1e-8);
  EXPECT_NEAR(f_functional_quadratic(4, 2.0) / kFfuncQuad_d4_2, 1.0, 1e-13);
  EXPECT_NEAR(f_functional_generic(4, 2.0, QuadraticField{}, quad) / kFfuncQuad_d4_2, 1.0, 1e-8);
}

TEST(Functional, ClosedFormLimits) {
  for (int d : {3, 5}) {
    EXPECT_NEAR(f_functional_point_charge(d, 1.0, 1e-12) * cap_capacity(d, 1.0), 1.0, 1e-10);
    EXPECT_GT(f_functional_point_charge(d, kPi - 1e-9, 1.0), 1e6);
    // The charge is integrable against the uniform measure, so the limit at the full sphere is finite.
    const double kpc = std::pow(2.0, 0.5 * (d - 2)) * gamma_fn(0.5 * (d - 1)) / (std::sqrt(kPi) * gamma_fn(0.5 * d - 1));
    const double pc_limit = (1.0 + kpc * beta_fn(0.5 * (d - 2), 0.5)) / cap_capacity(d, 1e-12);
    EXPECT_NEAR(f_functional_point_charge(d, 1e-9, 1.0) / pc_limit, 1.0, 1e-8);
    const double k = std::pow(2.0, d) * gamma_fn(0.5 * (d + 3)) / (std::sqrt(kPi) * gamma_fn(0.5 * d + 1));
    const double limit = (1.0 + k * beta_fn(0.5 * d + 1, 0.5 * d)) / cap_capacity(d, 1e-12);
    EXPECT_NEAR(f_functional_quadratic(d, 1e-9) / limit, 1.0, 1e-9);
  }
  EXPECT_GT(f_functional_quadratic(3, kPi - 1e-9), 1e8);
  EXPECT_THROW(f_functional_quadratic(3, kPi), DomainError);
  EXPECT_THROW(f_functional_point_charge(3, 1.0, -1.0), DomainError);
}

TEST(Characteristic, QuadraticBracketEndpoints) {
  EXPECT_NEAR(quadratic_lhs(3, 0.0), 7 * kPi / 16, 1e-10);
  EXPECT_NEAR(quadratic_rhs(3), 3 * kPi / 64, 1e-12);
  for (int d = 3; d <= 8; ++d) EXPECT_NEAR(quadratic_lhs(d, kPi), 0.0, 1e-30);
}

TEST(Characteristic, PointChargeLhsDecreasing) {
  for (int d = 3; d <= 8; ++d) {
    double prev = point_charge_lhs(d, kPi / 201);
    for (int i = 2; i <= 200; ++i) {
      const double cur = point_charge_lhs(d, kPi * i / 201);
      EXPECT_LT(cur, prev) << d << ' ' << i;
      prev = cur;
    }
  }
}

TEST(SolvePointCharge, MatchesReferenceRoots) {
  const double expect[4][3] = {{kAlphaPc_d3_q0p5, kAlphaPc_d3_q1, kAlphaPc_d3_q2},
                               {kAlphaPc_d4_q0p5, kAlphaPc_d4_q1, kAlphaPc_d4_q2},
                               {0.0, kAlphaPc_d5_q1, 0.0},
                               {kAlphaPc_d7_q0p5, kAlphaPc_d7_q1, kAlphaPc_d7_q2}};
  const int dims[4] = {3, 4, 5, 7};
  const double qs[3] = {0.5, 1.0, 2.0};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (expect[i][j] == 0.0) continue;
      const SupportSolveResult r = solve_alpha_point_charge(dims[i], qs[j]);
      EXPECT_NEAR(r.alpha0, expect[i][j], 1e-13) << dims[i] << ' ' << qs[j];
      EXPECT_LE(r.residual, 1e-12);
      EXPECT_EQ(r.method, SupportMethod::CharacteristicRoot);
      const double f0 = f_functional_point_charge(dims[i], r.alpha0, qs[j]);
      EXPECT_GT(f_functional_point_charge(dims[i], r.alpha0 - 1e-4, qs[j]), f0);
      EXPECT_GT(f_functional_point_charge(dims[i], r.alpha0 + 1e-4, qs[j]), f0);
    }
  }
}

TEST(SolvePointCharge, MonotoneInChargeAndLimits) {
  for (int d = 3; d <= 8; ++d) {
    double prev = 0.0;
    for (double q : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double a = solve_alpha_point_charge(d, q).alpha0;
      EXPECT_GT(a, prev) << d << ' ' << q;
      prev = a;
    }
  }
  EXPECT_LT(solve_alpha_point_charge(3, 1e-6).alpha0, 0.05);
  EXPECT_GT(solve_alpha_point_charge(3, 1e6).alpha0, kPi - 0.05);
  EXPECT_THROW(solve_alpha_point_charge(3, 0.0), DomainError);
}

TEST(SolveQuadratic, MatchesReferenceRoots) {
  const std::pair<int, double> cases[] = {{3, kAlphaQuad_d3}, {4, kAlphaQuad_d4}, {5, kAlphaQuad_d5},
                                          {7, kAlphaQuad_d7}, {8, kAlphaQuad_d8}};
  for (const auto& [d, a] : cases) {
    const SupportSolveResult r = solve_alpha_quadratic(d);
    EXPECT_NEAR(r.alpha0, a, 1e-13) << d;
    EXPECT_LE(r.residual, 1e-12);
    EXPECT_GT(r.curvature, 0.0);
    EXPECT_LE(r.lo, r.alpha0);
    EXPECT_GE(r.hi, r.alpha0);
  }
}

TEST(SolveGeneric, AgreesWithCharacteristicRoots) {
  const QuadratureConfig quad;
  const SupportSolveResult pc = solve_alpha_generic(4, make_point_charge(2.0), quad);
  EXPECT_NEAR(pc.alpha0, kAlphaPc_d4_q2, 1e-6);
  EXPECT_EQ(pc.method, SupportMethod::FMinimization);
  EXPECT_FALSE(pc.non_unimodal);
  const SupportSolveResult qd = solve_alpha_generic(5, QuadraticField{}, quad);
  EXPECT_NEAR(qd.alpha0, kAlphaQuad_d5, 1e-6);
}

TEST(SolveGeneric, ZeroFieldPrefersWholeSphere) {
  const SupportSolveResult r = solve_alpha_generic(3, ZeroField{}, QuadratureConfig{});
  EXPECT_TRUE(r.boundary);
  EXPECT_EQ(r.alpha0, 0.0);
}

TEST(Minimize, FlagsTwoWells) {
  const auto f = [](double a) { return std::cos(4.0 * a) + 0.01 * a; };
  const SupportSolveResult r = minimize_functional(f);
  EXPECT_TRUE(r.non_unimodal);
  EXPECT_FALSE(r.note.empty());
  MinimizeOptions bad;
  bad.grid = 2;
  EXPECT_THROW(minimize_functional(f, bad), ConfigError);
}

TEST(Robin, FunctionalMatchesProportionalConstant) {
  const QuadratureConfig quad;
  EXPECT_NEAR(robin_from_functional(3, make_point_charge(1.0), kAlphaPc_d3_q1) / kRobinPc_d3_q1, 1.0, 1e-12);
  EXPECT_NEAR(robin_from_functional(4, make_point_charge(2.0), kAlphaPc_d4_q2) / kRobinPc_d4_q2, 1.0, 1e-12);
  EXPECT_NEAR(robin_from_functional(3, QuadraticField{}, kAlphaQuad_d3) / kRobinQuad_d3, 1.0, 1e-12);
  EXPECT_NEAR(robin_from_functional(5, QuadraticField{}, kAlphaQuad_d5) / kRobinQuad_d5, 1.0, 1e-12);
  EXPECT_NEAR(robin_from_functional(4, ZeroField{}, 1.0) * cap_capacity(4, 1.0), 1.0, 1e-13);
  EXPECT_NEAR(robin_from_c_q(3, kCqQuad_d3) / kRobinQuad_d3, 1.0, 1e-13);
}

TEST(FunctionalProperty, LocalMinimumAtRoot) {
  for_all(61, 30, [](Gen& g) {
    const int d = g.integer(3, 8);
    const bool quad = g.integer(0, 1) == 1;
    const double q = g.log_uniform(0.2, 5.0);
    const double a = quad ? solve_alpha_quadratic(d).alpha0 : solve_alpha_point_charge(d, q).alpha0;
    auto f = [&](double x) { return quad ? f_functional_quadratic(d, x) : f_functional_point_charge(d, x, q); };
    const bool ok = f(a - 1e-3) > f(a) && f(a + 1e-3) > f(a);
    return ok ? std::string() : describe({{"d", double(d)}, {"q", q}, {"quadratic", double(quad)}});
  });
}

TEST(Sweep, ParallelMatchesSerialBitwise) {
  std::vector<double> alphas;
  for (int i = 0; i < 24; ++i) alphas.push_back(kPi * (i + 0.5) / 24);
  QuadratureConfig serial;
  serial.threads = 1;
  QuadratureConfig par;
  par.threads = 4;
  for (const ExternalFieldSpec& f : {ExternalFieldSpec(QuadraticField{}), ExternalFieldSpec(make_point_charge(1.0))}) {
    for (bool closed : {true, false}) {
      const auto a = f_functional_sweep(4, f, alphas, serial, closed);
      const auto b = f_functional_sweep(4, f, alphas, par, closed);
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
    }
  }
}

}  // namespace
