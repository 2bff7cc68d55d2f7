#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

namespace nehari {

/// Nodal values u_i ~ u(r_i) of a radial function on a RadialGrid.
using RadialField = std::vector<double>;

/// Which dimension range build() accepts. The quasilinear problem is posed for
/// 3 <= N <= 6; the semilinear reduction (lambda = 0) works for every N >= 3.
enum class DimensionPolicy { kQuasilinear, kSemilinear };

/**
 * Uniform mesh on [0, r_max] carrying the r^{N-1}-weighted trapezoid rule.
 *
 * Weights are w_i = |S^{N-1}| r_i^{N-1} c_i h with c_0 = c_{n-1} = 1/2 and
 * c_i = 1 otherwise, so sum_i w_i f(r_i) approximates the integral of a
 * radial f over the ball of radius r_max in R^N.
 *
 * w_0 = 0, and for N = 3 the Laplacian stencil at r = h does not involve
 * u_0, so in the discrete energy u_0 is tied to its neighbours only through
 * the derivative at r = h. Minimizers then carry an O(h^2) dip at the origin.
 */
class RadialGrid {
 public:
  static constexpr std::size_t kMinNodes = 16;

  static RadialGrid build(int dim, double r_max, std::size_t n,
                          DimensionPolicy policy = DimensionPolicy::kQuasilinear);

  int dim() const { return dim_; }
  double r_max() const { return r_max_; }
  double spacing() const { return h_; }
  std::size_t size() const { return nodes_.size(); }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  /// Surface measure of the unit (N-1)-sphere, 2 pi^{N/2} / Gamma(N/2).
  double sphere_measure() const { return sphere_measure_; }

  /// Samples a callable on every node.
  template <typename F>
  RadialField sample(F&& fn) const {
    RadialField out(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) out[i] = fn(nodes_[i]);
    return out;
  }

 private:
  RadialGrid(int dim, double r_max, std::size_t n);

  int dim_;
  double r_max_;
  double h_;
  double sphere_measure_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

double unit_sphere_measure(int dim);

// Discrete operators. All are linear and throw std::invalid_argument when the
// field length does not match the grid.

/// Delta u = u'' + (N-1)/r u' by central differences. At r = 0 the even ghost
/// u_{-1} = u_1 gives Delta u(0) = N u''(0); at r_max a one-sided second-order
/// stencil is used.
RadialField apply_laplacian(const RadialGrid& grid, std::span<const double> u);

/// Delta(Delta u) with Navier data Delta u(r_max) = 0 imposed between the two
/// applications.
RadialField apply_bilaplacian(const RadialGrid& grid, std::span<const double> u);

/// u'(r): zero at the origin, central in the interior, one-sided at r_max.
RadialField radial_derivative(const RadialGrid& grid, std::span<const double> u);

/// sum_i w_i f_i. Throws std::domain_error on NaN input.
double integrate(const RadialGrid& grid, std::span<const double> f);

/// (integrate |u|^p)^{1/p}, p >= 1.
double lp_norm(const RadialGrid& grid, std::span<const double> u, double p);

/// Matrix of apply_laplacian with the last row cleared. This is the Laplacian
/// seen by the energy: Navier data sets Delta u(r_max) = 0.
Eigen::SparseMatrix<double> energy_laplacian_matrix(const RadialGrid& grid);

/// Matrix of radial_derivative.
Eigen::SparseMatrix<double> derivative_matrix(const RadialGrid& grid);

/// Sets the Dirichlet node u(r_max) = 0.
void enforce_boundary(RadialField& u);

struct DecayAudit {
  bool ok = true;
  /// max |u(r)| / max |u| over r > tail_start.
  double tail_ratio = 0.0;
  double tail_start = 0.0;
};

/// Flags fields that have not decayed to threshold * max|u| beyond
/// 0.9 r_max, i.e. whose energy is likely biased by truncation.
DecayAudit audit_decay(const RadialGrid& grid, std::span<const double> u,
                       double threshold = 1e-6);

}  // namespace nehari
