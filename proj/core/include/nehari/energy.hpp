#pragma once

#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "nehari/problem.hpp"
#include "nehari/radial_grid.hpp"

namespace nehari {

/// The five integrals composing the energy
///   I(u) = (quad_bilap + quad_grad + quad_pot)/2 + lambda phi - nonlinear.
struct EnergyBreakdown {
  double quad_bilap = 0.0;  // int |Delta u|^2
  double quad_grad = 0.0;   // int |grad u|^2
  double quad_pot = 0.0;    // int V u^2
  double phi = 0.0;         // (1/4) int |grad rho(u^2)|^2
  double nonlinear = 0.0;   // int F(u)
  double total = 0.0;
};

/// int [rho'(u^2)]^2 u^2 |u'|^2, which equals (1/4) int |grad rho(u^2)|^2.
double phi_term(const RadialGrid& grid, const RhoSpec& rho, std::span<const double> u);

/// The two integral inequalities used to bound the fibering slope, evaluated
/// on a discrete field. Their failure points at quadrature error, not a bug.
struct ProofInequalities {
  double squared_curvature = 0.0;  // 2 int (rho'' u^2)^2 u^2 |u'|^2
  double phi = 0.0;                // bound for the above
  double mixed = 0.0;              // int rho' rho'' u^4 |u'|^2, expected <= 0
  bool curvature_bounded() const { return squared_curvature <= phi * (1.0 + 1e-12) + 1e-300; }
  bool mixed_nonpositive() const { return mixed <= 0.0; }
};

class RayProfile;

/**
 * Discrete energy of the problem on a fixed grid.
 *
 * Every quantity is a quadrature sum over nodal values built from the discrete
 * operators of radial_grid.hpp. gradient() is the exact gradient of the
 * discrete total energy with respect to the nodal values, so
 * gradient(u) . phi is the directional derivative I'(u) phi of the discrete
 * functional. The Dirichlet node r_max carries no gradient.
 */
class EnergyFunctional {
 public:
  EnergyFunctional(RadialGrid grid, ProblemSpec problem);

  const RadialGrid& grid() const { return grid_; }
  const ProblemSpec& problem() const { return problem_; }
  std::span<const double> potential() const { return potential_; }

  /// int (|Delta u|^2 + |grad u|^2 + V u^2).
  double norm_V_sq(std::span<const double> u) const;
  double phi(std::span<const double> u) const;
  EnergyBreakdown energy(std::span<const double> u) const;
  RadialField gradient(std::span<const double> u) const;
  /// I(v) - I(u), accurate when v is close to u.
  double energy_difference(std::span<const double> v, std::span<const double> u) const;

  /// J(u) = I'(u)u = ||u||_V^2 + 4 lambda int rho' rho'' u^4 |u'|^2
  ///        + lambda int |grad rho(u^2)|^2 - int f(u) u.
  double nehari_value(std::span<const double> u) const;

  /// J'(u)u = d/dt J(t u) at t = 1.
  double nehari_slope(std::span<const double> u) const;

  /// int f(u) u.
  double nonlinear_pairing(std::span<const double> u) const;

  ProofInequalities proof_inequalities(std::span<const double> u) const;

  /// Precomputes what is needed to evaluate t -> I(t u) and J(t u) in O(n)
  /// without stencils.
  RayProfile ray(std::span<const double> u) const;

  /// Matrix of the quadratic part: L^T W L + D^T W D + W V, with the boundary
  /// row and column replaced by the identity. With positive_part_only, V is
  /// replaced by V^+.
  Eigen::SparseMatrix<double> quadratic_form_matrix(bool positive_part_only = false) const;

 private:
  struct Stencils {
    RadialField lap;
    RadialField du;
  };
  Stencils stencils(std::span<const double> u) const;
  void require_size(std::span<const double> u) const;

  RadialGrid grid_;
  ProblemSpec problem_;
  RadialField potential_;
  Eigen::SparseMatrix<double> laplacian_;
  Eigen::SparseMatrix<double> derivative_;
};

/// t -> g(t) = I(t u) along a fixed ray.
class RayProfile {
 public:
  double energy(double t) const;
  /// J(t u).
  double nehari(double t) const;
  /// g'(t) = J(t u)/t, and 0 at t = 0.
  double slope(double t) const;
  double norm_V_sq() const { return norm_sq_; }

 private:
  friend class EnergyFunctional;

  double lambda_ = 0.0;
  double norm_sq_ = 0.0;
  const RhoSpec* rho_ = nullptr;
  const NonlinearitySpec* nonlinearity_ = nullptr;

  // Power-law nonlinearities scale exactly along the ray.
  bool homogeneous_ = false;
  double degree_ = 0.0;
  double primitive_sum_ = 0.0;
  double pairing_sum_ = 0.0;
  std::vector<double> f_weight_;  // w_i, for u_i != 0
  std::vector<double> f_value_;   // u_i

  bool rho_affine_ = false;
  double affine_q_ = 0.0;          // b^2 int u^2 |u'|^2
  std::vector<double> rho_weight_;  // w_i u_i^2 |u'_i|^2
  std::vector<double> rho_square_;  // u_i^2
};

}  // namespace nehari
