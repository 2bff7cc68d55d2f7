#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nehari/energy.hpp"
#include "nehari/fibering.hpp"
#include "test_support.hpp"

namespace nehari {
namespace {

using testing::dot;
using testing::radial_integral;
using testing::random_smooth_field;
using testing::sup_norm;

ProblemSpec spec_with(double lambda, RhoSpec rho, PotentialSpec v = PotentialSpec::constant(1.0),
                      int dim = 3, NonlinearitySpec f = NonlinearitySpec::power(1.0, 5.0)) {
  return ProblemSpec{dim, lambda, std::move(v), std::move(f), std::move(rho)};
}

RadialField gaussian(const RadialGrid& g) {
  RadialField u = g.sample([](double r) { return std::exp(-r * r); });
  enforce_boundary(u);
  return u;
}

// Closed forms for u = e^{-r^2} in N = 3.
double lap3(double r) { return (4 * r * r - 6) * std::exp(-r * r); }
double du(double r) { return -2 * r * std::exp(-r * r); }
double u0(double r) { return std::exp(-r * r); }

TEST(Energy, ZeroField) {
  const auto g = RadialGrid::build(3, 10.0, 201);
  const EnergyFunctional e(g, spec_with(1.0, SqrtShiftRho{}));
  RadialField z(g.size(), 0.0);
  const auto b = e.energy(z);
  EXPECT_EQ(b.total, 0.0);
  EXPECT_EQ(b.phi, 0.0);
  EXPECT_EQ(e.norm_V_sq(z), 0.0);
  EXPECT_EQ(e.nehari_value(z), 0.0);
  EXPECT_EQ(e.nehari_slope(z), 0.0);
  for (double v : e.gradient(z)) EXPECT_EQ(v, 0.0);
}

TEST(Energy, NormMatchesFineOracle) {
  const auto g = RadialGrid::build(3, 10.0, 2001);
  const EnergyFunctional e(g, spec_with(0.0, SqrtShiftRho{}));
  const double oracle = radial_integral(3, 10.0, [](double r) {
    return lap3(r) * lap3(r) + du(r) * du(r) + u0(r) * u0(r);
  });
  EXPECT_NEAR(e.norm_V_sq(gaussian(g)) / oracle, 1.0, 1e-4);
}

TEST(Energy, PhiTermFamilies) {
  const auto g = RadialGrid::build(3, 10.0, 2001);
  const auto u = gaussian(g);
  EXPECT_EQ(phi_term(g, AffineRho{3.0, 0.0}, u), 0.0);

  const auto d = radial_derivative(g, u);
  RadialField integrand(g.size());
  for (size_t i = 0; i < g.size(); ++i) integrand[i] = u[i] * u[i] * d[i] * d[i];
  EXPECT_NEAR(phi_term(g, AffineRho{1.0, 2.0}, u), 4.0 * integrate(g, integrand), 1e-13);
  for (size_t i = 0; i < g.size(); ++i) integrand[i] /= 4.0 * (1.0 + u[i] * u[i]);
  EXPECT_NEAR(phi_term(g, SqrtShiftRho{}, u), integrate(g, integrand), 1e-13);

  const double oracle = radial_integral(3, 10.0, [](double r) {
    return u0(r) * u0(r) * du(r) * du(r) / (4.0 * (1.0 + u0(r) * u0(r)));
  });
  EXPECT_NEAR(phi_term(g, SqrtShiftRho{}, u) / oracle, 1.0, 1e-4);
}

TEST(Energy, TotalMatchesFineOracle) {
  const auto g = RadialGrid::build(3, 10.0, 2001);
  const EnergyFunctional e(g, spec_with(1.0, AffineRho{0.0, 1.0}));
  const double oracle = radial_integral(3, 10.0, [](double r) {
    const double u = u0(r), d = du(r), l = lap3(r);
    return 0.5 * (l * l + d * d + u * u) + u * u * d * d - std::pow(u, 5) / 5.0;
  });
  const auto b = e.energy(gaussian(g));
  EXPECT_NEAR(b.total / oracle, 1.0, 1e-4);
  EXPECT_NEAR(b.total, 0.5 * (b.quad_bilap + b.quad_grad + b.quad_pot) + b.phi - b.nonlinear,
              1e-14 * std::abs(b.total));
}

TEST(Energy, LambdaZeroIsSemilinearEnergy) {
  const auto g = RadialGrid::build(3, 10.0, 501);
  std::mt19937_64 rng(11);
  const auto u = random_smooth_field(g, rng);
  const EnergyFunctional e(g, spec_with(0.0, SqrtShiftRho{}));
  RadialField big_f(g.size());
  for (size_t i = 0; i < g.size(); ++i) big_f[i] = std::pow(std::abs(u[i]), 5) / 5.0;
  EXPECT_NEAR(e.energy(u).total, 0.5 * e.norm_V_sq(u) - integrate(g, big_f), 1e-12);
}

struct GradientCase {
  int dim;
  double lambda;
  RhoSpec rho;
  PotentialSpec potential;
};

TEST(Energy, GradientMatchesCentralDifferences) {
  const std::vector<GradientCase> cases = {
      {3, 0.0, AffineRho{0.0, 1.0}, PotentialSpec::constant(1.0)},
      {3, 1.0, SqrtShiftRho{}, PotentialSpec::constant(1.0)},
      {3, 2.0, AffinePlusSqrtRho{0.5, 0.5}, PotentialSpec::inverse_power(1.0, 0.5, 1.0, 2.0)},
      {5, 1.0, PowerShiftRho{0.5}, PotentialSpec::constant(2.0)},
  };
  std::mt19937_64 rng(2024);
  for (const auto& c : cases) {
    const auto g = RadialGrid::build(c.dim, 12.0, 401);
    const EnergyFunctional e(g, spec_with(c.lambda, c.rho, c.potential, c.dim,
                                          NonlinearitySpec::power(1.0, c.dim == 5 ? 4.5 : 5.0)));
    for (int k = 0; k < 5; ++k) {
      const auto u = random_smooth_field(g, rng);
      const auto phi = random_smooth_field(g, rng);
      const double step = 1e-5 * sup_norm(u) / sup_norm(phi);
      RadialField plus = u, minus = u;
      for (size_t i = 0; i < u.size(); ++i) {
        plus[i] += step * phi[i];
        minus[i] -= step * phi[i];
      }
      const double fd = (e.energy(plus).total - e.energy(minus).total) / (2.0 * step);
      const double exact = dot(e.gradient(u), phi);
      EXPECT_NEAR(fd, exact, 1e-6 * std::abs(exact)) << "N = " << c.dim << " lambda = " << c.lambda;
    }
  }
}

TEST(Energy, BoundaryGradientIsZero) {
  const auto g = RadialGrid::build(3, 5.0, 101);
  std::mt19937_64 rng(1);
  auto u = random_smooth_field(g, rng);
  u.back() = 0.3;  // even off the boundary condition
  const EnergyFunctional e(g, spec_with(1.0, SqrtShiftRho{}));
  EXPECT_EQ(e.gradient(u).back(), 0.0);
}

TEST(Energy, QuadraticGradientIsVForm) {
  // At lambda = 0 the gradient is K u minus the weighted nonlinearity.
  const auto g = RadialGrid::build(3, 10.0, 301);
  const EnergyFunctional e(g, spec_with(0.0, SqrtShiftRho{}));
  std::mt19937_64 rng(5);
  const auto u = random_smooth_field(g, rng);
  const auto k = e.quadratic_form_matrix();
  Eigen::Map<const Eigen::VectorXd> uv(u.data(), static_cast<Eigen::Index>(u.size()));
  const Eigen::VectorXd ku = k * uv;
  // Rounding in both products is bounded by eps * sum_j |K_ij u_j|.
  const Eigen::VectorXd scale = k.cwiseAbs() * uv.cwiseAbs();
  const auto grad = e.gradient(u);
  const auto w = g.weights();
  for (size_t i = 0; i + 1 < g.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double f = eval_nonlinearity(e.problem().nonlinearity, u[i]).f;
    EXPECT_NEAR(grad[i] + w[i] * f, ku[ii], 1e-13 * (1.0 + scale[ii]));
  }
  EXPECT_NEAR(uv.dot(ku), e.norm_V_sq(u), 1e-9 * e.norm_V_sq(u));
}

TEST(Energy, NehariValueIsGradientPairing) {
  std::mt19937_64 rng(77);
  for (const RhoSpec& rho : {RhoSpec{AffineRho{0.0, 1.0}}, RhoSpec{SqrtShiftRho{}},
                             RhoSpec{PowerShiftRho{0.6}}}) {
    const auto g = RadialGrid::build(3, 12.0, 601);
    const EnergyFunctional e(g, spec_with(1.5, rho));
    for (int k = 0; k < 4; ++k) {
      const auto u = random_smooth_field(g, rng);
      const double j = e.nehari_value(u);
      const double scale = e.norm_V_sq(u) + e.nonlinear_pairing(u);
      EXPECT_NEAR(j, dot(e.gradient(u), u), 1e-8 * scale) << rho_family_name(rho);
    }
  }
}

TEST(Energy, NehariValueAndSlopeAtLambdaZero) {
  const auto g = RadialGrid::build(3, 12.0, 601);
  const EnergyFunctional e(g, spec_with(0.0, SqrtShiftRho{}, PotentialSpec::constant(1.0), 3,
                                        NonlinearitySpec::power(2.0, 6.0)));
  std::mt19937_64 rng(8);
  const auto u = random_smooth_field(g, rng);
  const double norm = e.norm_V_sq(u);
  const double lp = std::pow(lp_norm(g, u, 6.0), 6.0);
  EXPECT_NEAR(e.nehari_value(u), norm - 2.0 * lp, 1e-10 * (norm + lp));
  EXPECT_NEAR(e.nehari_slope(u), 2.0 * norm - 2.0 * 6.0 * lp, 1e-10 * (norm + lp));
}

TEST(Energy, NehariSlopeMatchesRayDerivative) {
  std::mt19937_64 rng(99);
  for (const RhoSpec& rho : {RhoSpec{AffineRho{0.0, 1.0}}, RhoSpec{SqrtShiftRho{}},
                             RhoSpec{AffinePlusSqrtRho{1.0, 0.5}}, RhoSpec{PowerShiftRho{0.4}}}) {
    const auto g = RadialGrid::build(3, 12.0, 601);
    const EnergyFunctional e(g, spec_with(1.0, rho));
    for (int k = 0; k < 3; ++k) {
      const auto u = random_smooth_field(g, rng);
      const double dt = 1e-5;
      RadialField plus = u, minus = u;
      for (size_t i = 0; i < u.size(); ++i) {
        plus[i] *= 1.0 + dt;
        minus[i] *= 1.0 - dt;
      }
      const double fd = (e.nehari_value(plus) - e.nehari_value(minus)) / (2.0 * dt);
      const double exact = e.nehari_slope(u);
      EXPECT_NEAR(fd, exact, 1e-6 * std::abs(exact)) << rho_family_name(rho);
    }
  }
}

TEST(Energy, RayProfileAgreesWithDirectEvaluation) {
  std::mt19937_64 rng(3);
  for (const RhoSpec& rho : {RhoSpec{AffineRho{0.0, 1.0}}, RhoSpec{SqrtShiftRho{}},
                             RhoSpec{PowerShiftRho{0.7}}}) {
    const auto g = RadialGrid::build(3, 12.0, 301);
    const EnergyFunctional e(g, spec_with(0.8, rho));
    const auto u = random_smooth_field(g, rng);
    const auto ray = e.ray(u);
    for (double t : {0.0, 0.01, 0.7, 1.0, 3.0}) {
      RadialField tu = u;
      for (double& v : tu) v *= t;
      const double scale = 1.0 + e.norm_V_sq(tu) + e.nonlinear_pairing(tu);
      EXPECT_NEAR(ray.energy(t), e.energy(tu).total, 1e-11 * scale) << t;
      EXPECT_NEAR(ray.nehari(t), e.nehari_value(tu), 1e-11 * scale) << t;
    }
  }
}

TEST(Energy, DiscreteHolderHoldsExactly) {
  const auto g = RadialGrid::build(3, 15.0, 801);
  const auto v = PotentialSpec::inverse_power(1.0, 2.0, 1.0, 4.0);
  const auto sampled = sample_potential(v, g);
  std::mt19937_64 rng(17);
  for (int k = 0; k < 20; ++k) {
    const auto u = random_smooth_field(g, rng);
    RadialField lhs_integrand(g.size());
    for (size_t i = 0; i < g.size(); ++i) lhs_integrand[i] = sampled.negative[i] * u[i] * u[i];
    const double lhs = integrate(g, lhs_integrand);
    const double rhs = lp_norm(g, sampled.negative, 1.5) * std::pow(lp_norm(g, u, 6.0), 2.0);
    EXPECT_LE(lhs, rhs + 1e-12 * (1.0 + rhs));
  }
}

TEST(Energy, EvenInTheField) {
  const auto g = RadialGrid::build(3, 12.0, 401);
  const EnergyFunctional e(g, spec_with(1.0, SqrtShiftRho{}));
  std::mt19937_64 rng(4);
  auto u = random_smooth_field(g, rng);
  auto minus = u;
  for (double& x : minus) x = -x;
  EXPECT_NEAR(e.energy(minus).total, e.energy(u).total, 1e-13 * std::abs(e.energy(u).total));
}

TEST(Energy, MonotoneInLambda) {
  const auto g = RadialGrid::build(3, 12.0, 401);
  std::mt19937_64 rng(21);
  for (int k = 0; k < 5; ++k) {
    const auto u = random_smooth_field(g, rng);
    double previous = -HUGE_VAL;
    for (double lambda : {0.0, 0.5, 1.0, 4.0}) {
      const EnergyFunctional e(g, spec_with(lambda, SqrtShiftRho{}));
      const auto b = e.energy(u);
      EXPECT_GE(b.phi, 0.0);
      EXPECT_GE(b.total, previous);
      previous = b.total;
    }
  }
}

TEST(Energy, DifferenceMatchesTotalsAndFirstOrder) {
  const auto g = RadialGrid::build(3, 12.0, 801);
  const EnergyFunctional e(g, spec_with(1.0, SqrtShiftRho{}));
  std::mt19937_64 rng(31);
  const auto u = random_smooth_field(g, rng);
  const auto phi = random_smooth_field(g, rng);
  for (double s : {1.0, 1e-2}) {
    RadialField v = u;
    for (size_t i = 0; i < u.size(); ++i) v[i] += s * phi[i];
    const double direct = e.energy(v).total - e.energy(u).total;
    EXPECT_NEAR(e.energy_difference(v, u), direct, 1e-10 * (1.0 + std::abs(e.energy(u).total)));
  }
  // At tiny steps the difference follows the gradient where subtracting the
  // totals would be rounding noise.
  const double s = 1e-9;
  RadialField v = u;
  for (size_t i = 0; i < u.size(); ++i) v[i] += s * phi[i];
  const double predicted = s * dot(e.gradient(u), phi);
  EXPECT_NEAR(e.energy_difference(v, u), predicted, 1e-5 * std::abs(predicted));
}

TEST(Energy, ProofInequalitiesOnProjectedFields) {
  const auto g = RadialGrid::build(3, 15.0, 801);
  const EnergyFunctional e(g, spec_with(1.0, SqrtShiftRho{}));
  std::mt19937_64 rng(45);
  for (int k = 0; k < 5; ++k) {
    const auto p = project_to_nehari(e, random_smooth_field(g, rng));
    const auto ineq = e.proof_inequalities(p.field);
    EXPECT_TRUE(ineq.mixed_nonpositive());
    EXPECT_TRUE(ineq.curvature_bounded());
  }
}

TEST(Energy, RejectsMismatchedInputs) {
  const auto g = RadialGrid::build(3, 10.0, 101);
  EXPECT_THROW(EnergyFunctional(g, spec_with(1.0, SqrtShiftRho{}, PotentialSpec::constant(1.0), 4)),
               std::invalid_argument);
  const EnergyFunctional e(g, spec_with(1.0, SqrtShiftRho{}));
  RadialField shorter(100, 0.0);
  EXPECT_THROW(e.energy(shorter), std::invalid_argument);
}

}  // namespace
}  // namespace nehari
