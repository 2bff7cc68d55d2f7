#include <gtest/gtest.h>

#include <cmath>

#include "nehari/hypotheses.hpp"
#include "test_support.hpp"

namespace nehari {
namespace {

Verdict verdict(const HypothesisReport& r, std::string_view id) {
  const auto* h = r.find(id);
  EXPECT_NE(h, nullptr) << id;
  return h ? h->verdict : Verdict::kFail;
}

void expect_fail_with_witness(const HypothesisReport& r, std::string_view id) {
  const auto* h = r.find(id);
  ASSERT_NE(h, nullptr) << id;
  EXPECT_EQ(h->verdict, Verdict::kFail) << id;
  EXPECT_TRUE(h->witness.has_value()) << id;
}

TEST(Sobolev, MatchesBubbleRayleighQuotient) {
  for (int dim : {3, 4, 5, 6}) {
    const double s = sobolev_constant(dim);
    EXPECT_NEAR(s / testing::bubble_rayleigh_quotient(dim), 1.0, 1e-3) << "N = " << dim;
  }
  EXPECT_NEAR(sobolev_constant(3), 5.4779, 1e-3);
  EXPECT_THROW(sobolev_constant(2), std::invalid_argument);
}

TEST(Potential, ConstantPasses) {
  const auto grid = RadialGrid::build(3, 20.0, 1001);
  const auto r = check_potential(PotentialSpec::constant(1.0), grid);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.constants.v_minus_norm.value_or(-1.0), 0.0);
}

TEST(Potential, SmallWellPassesLargeWellFails) {
  const auto grid = RadialGrid::build(3, 20.0, 2001);
  const auto small = check_potential(PotentialSpec::inverse_power(1.0, 0.5, 1.0, 1.0), grid);
  EXPECT_EQ(verdict(small, "V2"), Verdict::kPass);
  EXPECT_LT(*small.constants.v_minus_norm, *small.constants.sobolev);

  const auto huge = check_potential(PotentialSpec::inverse_power(1.0, 50.0, 1.0, 3.0), grid);
  expect_fail_with_witness(huge, "V2");
  EXPECT_GE(*huge.constants.v_minus_norm, *huge.constants.sobolev);
}

TEST(Potential, SecondConditionFlipsOnceInC) {
  const auto grid = RadialGrid::build(3, 20.0, 1001);
  auto passes = [&](double c) {
    return verdict(check_potential(PotentialSpec::inverse_power(1.0, c, 1.0, 3.0), grid), "V2") !=
           Verdict::kFail;
  };
  // Scan for monotonicity, then bisect the single flip.
  bool previous = true;
  int flips = 0;
  for (double c = 0.25; c <= 40.0; c *= 1.25) {
    const bool now = passes(c);
    if (now != previous) ++flips;
    EXPECT_FALSE(now && !previous) << "pass after fail at c = " << c;
    previous = now;
  }
  EXPECT_EQ(flips, 1);
  double lo = 0.25, hi = 40.0;
  ASSERT_TRUE(passes(lo));
  ASSERT_FALSE(passes(hi));
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? lo : hi) = mid;
  }
  EXPECT_LT(hi - lo, 1e-6 * hi);
}

TEST(Potential, TailCheck) {
  const auto grid = RadialGrid::build(3, 20.0, 1001);
  const auto slow = PotentialSpec::custom(1.0, [](double r) { return 1.0 + 1.0 / (1.0 + r); });
  expect_fail_with_witness(check_potential(slow, grid), "V1");
}

TEST(Nonlinearity, PowerPassesWithClosedFormDelta) {
  const auto r = check_nonlinearity(NonlinearitySpec::power(1.0, 5.0), 3);
  EXPECT_TRUE(r.passed());
  for (const auto& h : r.results) EXPECT_EQ(h.verdict, Verdict::kPass) << h.id;
  EXPECT_NEAR(*r.constants.delta_hat, 3.0, 1e-9);
  EXPECT_NEAR(*r.constants.m_hat, 1.0, 1e-9);
}

TEST(Nonlinearity, LinearFailsFirstCondition) {
  const auto f = NonlinearitySpec::from_callback(
      5.0, [](double t) { return NonlinearityValue{t, 1.0, 0.5 * t * t}; });
  const auto r = check_nonlinearity(f, 3);
  expect_fail_with_witness(r, "f1");
  EXPECT_EQ(r.find("f1")->witness->point, 0.0);
}

TEST(Nonlinearity, CubicDeclaredQuinticFailsGrowthConditions) {
  const auto f = NonlinearitySpec::from_callback(
      5.0, [](double t) { return NonlinearityValue{t * t * t, 3 * t * t, t * t * t * t / 4}; });
  const auto r = check_nonlinearity(f, 3);
  expect_fail_with_witness(r, "f2");
  EXPECT_GT(r.find("f2")->witness->point, 1.0);
  expect_fail_with_witness(r, "f4");
}

TEST(Nonlinearity, ExponentRange) {
  for (double p : {4.5, 5.0, 8.0}) {
    EXPECT_TRUE(check_nonlinearity(NonlinearitySpec::power(2.0, p), 3).passed()) << p;
  }
  EXPECT_FALSE(check_nonlinearity(NonlinearitySpec::power(1.0, 4.0), 3).passed());
  EXPECT_FALSE(check_nonlinearity(NonlinearitySpec::power(1.0, 3.0), 3).passed());
  // N = 5: p < 10; N = 6: p < 6.
  EXPECT_TRUE(check_nonlinearity(NonlinearitySpec::power(1.0, 9.0), 5).passed());
  EXPECT_FALSE(check_nonlinearity(NonlinearitySpec::power(1.0, 10.0), 5).passed());
  EXPECT_TRUE(check_nonlinearity(NonlinearitySpec::power(1.0, 5.5), 6).passed());
  EXPECT_FALSE(check_nonlinearity(NonlinearitySpec::power(1.0, 6.0), 6).passed());
  // N = 4 is not covered by the exponent range: accepted with a warning.
  const auto n4 = check_nonlinearity(NonlinearitySpec::power(1.0, 5.0), 4);
  EXPECT_TRUE(n4.passed());
  EXPECT_EQ(verdict(n4, "f2"), Verdict::kPassWithWarning);
}

TEST(Rho, BuiltInFamiliesPass) {
  for (const RhoSpec& rho :
       {RhoSpec{AffineRho{0.0, 1.0}}, RhoSpec{AffineRho{2.0, 0.5}}, RhoSpec{SqrtShiftRho{}},
        RhoSpec{AffinePlusSqrtRho{1.0, 1.0}}, RhoSpec{PowerShiftRho{0.3}},
        RhoSpec{PowerShiftRho{0.5}}, RhoSpec{PowerShiftRho{1.0}}}) {
    const auto r = check_rho(rho);
    EXPECT_TRUE(r.passed()) << rho_family_name(rho);
  }
}

TEST(Rho, PowerShiftBelowThresholdFailsFourthCondition) {
  const auto r = check_rho(PowerShiftRho{0.2});
  expect_fail_with_witness(r, "rho4");
  // rho' >= -sqrt(2) rho'' s fails for s > 1 / (sqrt(2) 0.8 - 1) ~ 7.6.
  const double threshold = 1.0 / (std::sqrt(2.0) * 0.8 - 1.0);
  EXPECT_GT(r.find("rho4")->witness->point, threshold);
  EXPECT_LT(r.find("rho4")->witness->point, 10.0);
  for (double alpha : {0.1, 0.25}) expect_fail_with_witness(check_rho(PowerShiftRho{alpha}), "rho4");
}

TEST(Problem, LambdaZeroDowngradesRhoFailures) {
  const auto grid = RadialGrid::build(3, 20.0, 401);
  ProblemSpec spec = testing::default_problem(0.0);
  spec.rho = PowerShiftRho{0.2};
  const auto r = check_problem(spec, grid);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(verdict(r, "rho4"), Verdict::kPassWithWarning);
  EXPECT_FALSE(check_problem(spec.with_lambda(1.0), grid).passed());
}

TEST(Report, FailuresCarryWitnesses) {
  const auto grid = RadialGrid::build(3, 20.0, 401);
  ProblemSpec spec = testing::default_problem(1.0);
  spec.rho = PowerShiftRho{0.1};
  spec.nonlinearity = NonlinearitySpec::power(1.0, 4.0);
  const auto r = check_problem(spec, grid);
  EXPECT_FALSE(r.passed());
  for (const auto& h : r.results) {
    if (h.verdict == Verdict::kFail) EXPECT_TRUE(h.witness.has_value()) << h.id;
  }
}

}  // namespace
}  // namespace nehari
