#include <gtest/gtest.h>

#include <cmath>

#include "nehari/problem.hpp"

namespace nehari {
namespace {

TEST(Potential, ConstantProfile) {
  const auto v = PotentialSpec::constant(1.0);
  for (double r : {0.0, 0.3, 5.0, 100.0}) EXPECT_EQ(eval_potential(v, r, 0.01).value, 1.0);
}

TEST(Potential, InversePowerProfile) {
  const auto v = PotentialSpec::inverse_power(1.0, 1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(eval_potential(v, 0.5, 0.01).value, 1.0 - 2.0);
  EXPECT_DOUBLE_EQ(eval_potential(v, 2.0, 0.01).value, 1.0);
  const auto origin = eval_potential(v, 0.0, 0.01);
  EXPECT_TRUE(origin.regularized);
  EXPECT_DOUBLE_EQ(origin.value, 1.0 - 1.0 / 0.005);
  EXPECT_FALSE(eval_potential(v, 0.5, 0.01).regularized);
}

TEST(Potential, InversePowerRejectsBadParameters) {
  EXPECT_THROW(PotentialSpec::inverse_power(1.0, 0.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(PotentialSpec::inverse_power(1.0, 1.0, 2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(PotentialSpec::inverse_power(1.0, 1.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(PotentialSpec::inverse_power(1.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST(Potential, TabulatedInterpolatesAndFallsBackToLimit) {
  const auto v = PotentialSpec::tabulated(2.0, {0.0, 1.0, 2.0}, {0.0, 1.0, 3.0});
  EXPECT_DOUBLE_EQ(eval_potential(v, 0.5, 0.01).value, 0.5);
  EXPECT_DOUBLE_EQ(eval_potential(v, 1.5, 0.01).value, 2.0);
  EXPECT_DOUBLE_EQ(eval_potential(v, 5.0, 0.01).value, 2.0);
}

TEST(Potential, SplitIsExact) {
  const auto v = PotentialSpec::inverse_power(1.0, 0.7, 1.3, 2.0);
  for (double r = 0.0; r < 4.0; r += 0.013) {
    const auto s = eval_potential(v, r, 0.01);
    EXPECT_EQ(s.positive * s.negative, 0.0);
    EXPECT_EQ(s.positive - s.negative, s.value);
  }
}

TEST(Nonlinearity, PowerFormulas) {
  const auto f = NonlinearitySpec::power(1.0, 5.0);
  const auto at2 = eval_nonlinearity(f, 2.0);
  EXPECT_DOUBLE_EQ(at2.f, 16.0);
  EXPECT_DOUBLE_EQ(at2.df, 32.0);  // (p - 1) |t|^{p-2}
  EXPECT_DOUBLE_EQ(at2.primitive, 32.0 / 5.0);
  const auto at_m2 = eval_nonlinearity(f, -2.0);
  EXPECT_DOUBLE_EQ(at_m2.f, -16.0);
  EXPECT_DOUBLE_EQ(at_m2.primitive, 32.0 / 5.0);
  const auto at0 = eval_nonlinearity(f, 0.0);
  EXPECT_EQ(at0.f, 0.0);
  EXPECT_EQ(at0.df, 0.0);
  EXPECT_EQ(at0.primitive, 0.0);
  EXPECT_EQ(f.homogeneity(), 5.0);
}

TEST(Nonlinearity, PowerRejectsBadParameters) {
  EXPECT_THROW(NonlinearitySpec::power(0.0, 5.0), std::invalid_argument);
  EXPECT_THROW(NonlinearitySpec::power(1.0, 1.5), std::invalid_argument);
}

TEST(Nonlinearity, TripleConsistency) {
  const auto power = NonlinearitySpec::power(2.0, 6.0);
  EXPECT_LT(nonlinearity_consistency(power).worst_relative_error, 1e-6);
  // t^3 + t^5 with its analytic derivative and primitive.
  const auto mixed = NonlinearitySpec::from_callback(6.0, [](double t) {
    return NonlinearityValue{t * t * t + std::pow(t, 5), 3 * t * t + 5 * std::pow(t, 4),
                             std::pow(t, 4) / 4 + std::pow(t, 6) / 6};
  });
  EXPECT_LT(nonlinearity_consistency(mixed).worst_relative_error, 1e-6);
  // A wrong derivative is caught.
  const auto wrong = NonlinearitySpec::from_callback(6.0, [](double t) {
    return NonlinearityValue{std::pow(t, 5), 4 * std::pow(t, 4), std::pow(t, 6) / 6};
  });
  EXPECT_GT(nonlinearity_consistency(wrong).worst_relative_error, 1e-2);
}

TEST(Rho, FamilyValues) {
  const RhoSpec affine = AffineRho{0.0, 1.0};
  for (double s : {0.0, 0.5, 7.0, 1e4}) {
    EXPECT_EQ(eval_rho(affine, s, 1), 1.0);
    EXPECT_EQ(eval_rho(affine, s, 2), 0.0);
    EXPECT_EQ(eval_rho(affine, s, 3), 0.0);
  }
  const RhoSpec sq = SqrtShiftRho{};
  EXPECT_DOUBLE_EQ(eval_rho(sq, 3.0, 0), 2.0);
  EXPECT_DOUBLE_EQ(eval_rho(sq, 3.0, 1), 0.25);
  EXPECT_DOUBLE_EQ(eval_rho(sq, 3.0, 2), -1.0 / 32.0);
  EXPECT_THROW(eval_rho(sq, 1.0, 5), std::out_of_range);
  EXPECT_THROW(eval_rho(sq, 1.0, -1), std::out_of_range);
}

TEST(Rho, PowerShiftOneMatchesAffineDerivatives) {
  const RhoSpec ps = PowerShiftRho{1.0};
  const RhoSpec aff = AffineRho{1.0, 1.0};
  for (double s : {0.0, 0.1, 3.0, 1e3}) {
    for (int k = 1; k <= 4; ++k) EXPECT_DOUBLE_EQ(eval_rho(ps, s, k), eval_rho(aff, s, k));
  }
}

TEST(Rho, DerivativeConsistency) {
  for (const RhoSpec& rho : {RhoSpec{AffineRho{0.0, 1.0}}, RhoSpec{SqrtShiftRho{}},
                             RhoSpec{AffinePlusSqrtRho{1.0, 2.0}}, RhoSpec{PowerShiftRho{0.4}}}) {
    EXPECT_LT(rho_consistency(rho).worst_relative_error, 1e-4) << rho_family_name(rho);
  }
}

TEST(ProblemSpec, Validation) {
  ProblemSpec spec{3, 1.0, PotentialSpec::constant(1.0), NonlinearitySpec::power(1.0, 5.0)};
  EXPECT_NO_THROW(spec.validate());
  spec.lambda = -0.1;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec.lambda = 1.0;
  spec.dim = 7;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec.lambda = 0.0;
  EXPECT_NO_THROW(spec.validate());
  EXPECT_TRUE(admissible_dimension(9, 0.0));
  EXPECT_FALSE(admissible_dimension(2, 0.0));
  EXPECT_EQ(spec.with_lambda(0.5).lambda, 0.5);
}

}  // namespace
}  // namespace nehari
