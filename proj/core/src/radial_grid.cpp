#include "nehari/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nehari {

namespace {

void require_size(const RadialGrid& grid, std::span<const double> u) {
  if (u.size() != grid.size()) {
    throw std::invalid_argument("field has " + std::to_string(u.size()) +
                                " values but grid has " + std::to_string(grid.size()) +
                                " nodes");
  }
}

}  // namespace

double unit_sphere_measure(int dim) {
  const double half = 0.5 * dim;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

RadialGrid RadialGrid::build(int dim, double r_max, std::size_t n, DimensionPolicy policy) {
  if (dim < 3) {
    throw std::invalid_argument("dimension must be at least 3, got " + std::to_string(dim));
  }
  if (policy == DimensionPolicy::kQuasilinear && dim > 6) {
    throw std::invalid_argument("dimension " + std::to_string(dim) +
                                " is outside 3..6; only lambda = 0 admits N > 6");
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw std::invalid_argument("r_max must be positive and finite");
  }
  if (n < kMinNodes) {
    throw std::invalid_argument("grid needs at least " + std::to_string(kMinNodes) +
                                " nodes, got " + std::to_string(n));
  }
  return RadialGrid(dim, r_max, n);
}

RadialGrid::RadialGrid(int dim, double r_max, std::size_t n)
    : dim_(dim),
      r_max_(r_max),
      h_(r_max / static_cast<double>(n - 1)),
      sphere_measure_(unit_sphere_measure(dim)),
      nodes_(n),
      weights_(n) {
  for (std::size_t i = 0; i < n; ++i) nodes_[i] = static_cast<double>(i) * h_;
  nodes_.back() = r_max;
  for (std::size_t i = 0; i < n; ++i) {
    const double trapezoid = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    weights_[i] = sphere_measure_ * std::pow(nodes_[i], dim - 1) * trapezoid * h_;
  }
}

RadialField apply_laplacian(const RadialGrid& grid, std::span<const double> u) {
  require_size(grid, u);
  const std::size_t n = u.size();
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const double bend = grid.dim() - 1;
  RadialField out(n);

  out[0] = grid.dim() * 2.0 * (u[1] - u[0]) * inv_h2;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double second = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_h2;
    const double first = (u[i + 1] - u[i - 1]) / (2.0 * h);
    out[i] = second + bend / grid.node(i) * first;
  }
  const std::size_t e = n - 1;
  const double second = (2.0 * u[e] - 5.0 * u[e - 1] + 4.0 * u[e - 2] - u[e - 3]) * inv_h2;
  const double first = (3.0 * u[e] - 4.0 * u[e - 1] + u[e - 2]) / (2.0 * h);
  out[e] = second + bend / grid.node(e) * first;
  return out;
}

RadialField apply_bilaplacian(const RadialGrid& grid, std::span<const double> u) {
  RadialField lap = apply_laplacian(grid, u);
  lap.back() = 0.0;
  return apply_laplacian(grid, lap);
}

RadialField radial_derivative(const RadialGrid& grid, std::span<const double> u) {
  require_size(grid, u);
  const std::size_t n = u.size();
  const double h = grid.spacing();
  RadialField out(n);
  out[0] = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
  const std::size_t e = n - 1;
  out[e] = (3.0 * u[e] - 4.0 * u[e - 1] + u[e - 2]) / (2.0 * h);
  return out;
}

double integrate(const RadialGrid& grid, std::span<const double> f) {
  require_size(grid, f);
  const auto w = grid.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::isnan(f[i])) {
      throw std::domain_error("NaN integrand at node " + std::to_string(i));
    }
    sum += w[i] * f[i];
  }
  return sum;
}

double lp_norm(const RadialGrid& grid, std::span<const double> u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p norm needs p >= 1");
  require_size(grid, u);
  RadialField powered(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) powered[i] = std::pow(std::abs(u[i]), p);
  return std::pow(integrate(grid, powered), 1.0 / p);
}

Eigen::SparseMatrix<double> energy_laplacian_matrix(const RadialGrid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const double bend = grid.dim() - 1;
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(3 * grid.size());
  entries.emplace_back(0, 0, -2.0 * grid.dim() * inv_h2);
  entries.emplace_back(0, 1, 2.0 * grid.dim() * inv_h2);
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double drift = bend / grid.node(static_cast<std::size_t>(i)) / (2.0 * h);
    entries.emplace_back(i, i - 1, inv_h2 - drift);
    entries.emplace_back(i, i, -2.0 * inv_h2);
    entries.emplace_back(i, i + 1, inv_h2 + drift);
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

Eigen::SparseMatrix<double> derivative_matrix(const RadialGrid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double inv_2h = 1.0 / (2.0 * grid.spacing());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(2 * grid.size() + 3);
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    entries.emplace_back(i, i - 1, -inv_2h);
    entries.emplace_back(i, i + 1, inv_2h);
  }
  const Eigen::Index e = n - 1;
  entries.emplace_back(e, e, 3.0 * inv_2h);
  entries.emplace_back(e, e - 1, -4.0 * inv_2h);
  entries.emplace_back(e, e - 2, inv_2h);
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

void enforce_boundary(RadialField& u) {
  if (!u.empty()) u.back() = 0.0;
}

DecayAudit audit_decay(const RadialGrid& grid, std::span<const double> u, double threshold) {
  require_size(grid, u);
  DecayAudit audit;
  audit.tail_start = 0.9 * grid.r_max();
  double peak = 0.0;
  for (double v : u) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return audit;
  double tail = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (grid.node(i) > audit.tail_start) tail = std::max(tail, std::abs(u[i]));
  }
  audit.tail_ratio = tail / peak;
  audit.ok = audit.tail_ratio <= threshold;
  return audit;
}

}  // namespace nehari
