#include "nehari/energy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nehari {

namespace {

using ConstMap = Eigen::Map<const Eigen::VectorXd>;
using Map = Eigen::Map<Eigen::VectorXd>;

ConstMap view(std::span<const double> v) {
  return ConstMap(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Per-node quasilinear integrands, all multiplied by w_i |u'_i|^2:
//   q  = rho'^2 u^2               (phi)
//   a  = rho' rho'' u^4           (the mixed term of J)
//   b  = rho''^2 u^6
//   c  = rho' rho''' u^6
struct QuasilinearSums {
  double q = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

QuasilinearSums quasilinear_sums(const RadialGrid& grid, const RhoSpec& rho,
                                 std::span<const double> u, std::span<const double> du) {
  QuasilinearSums s;
  const auto w = grid.weights();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double weight = w[i] * du[i] * du[i];
    if (weight == 0.0 || u[i] == 0.0) continue;
    const double u2 = u[i] * u[i];
    const auto d = rho_derivatives(rho, u2);
    s.q += weight * d.d1 * d.d1 * u2;
    s.a += weight * d.d1 * d.d2 * u2 * u2;
    s.b += weight * d.d2 * d.d2 * u2 * u2 * u2;
    s.c += weight * d.d1 * d.d3 * u2 * u2 * u2;
  }
  return s;
}

}  // namespace

double phi_term(const RadialGrid& grid, const RhoSpec& rho, std::span<const double> u) {
  const auto du = radial_derivative(grid, u);
  return quasilinear_sums(grid, rho, u, du).q;
}

EnergyFunctional::EnergyFunctional(RadialGrid grid, ProblemSpec problem)
    : grid_(std::move(grid)),
      problem_(std::move(problem)),
      laplacian_(energy_laplacian_matrix(grid_)),
      derivative_(derivative_matrix(grid_)) {
  problem_.validate();
  if (grid_.dim() != problem_.dim) {
    throw std::invalid_argument("grid dimension " + std::to_string(grid_.dim()) +
                                " differs from problem dimension " + std::to_string(problem_.dim));
  }
  potential_ = sample_potential(problem_.potential, grid_).value;
}

void EnergyFunctional::require_size(std::span<const double> u) const {
  if (u.size() != grid_.size()) {
    throw std::invalid_argument("field has " + std::to_string(u.size()) + " values, grid has " +
                                std::to_string(grid_.size()));
  }
}

EnergyFunctional::Stencils EnergyFunctional::stencils(std::span<const double> u) const {
  require_size(u);
  Stencils s{apply_laplacian(grid_, u), radial_derivative(grid_, u)};
  s.lap.back() = 0.0;  // Navier: Delta u(r_max) = 0
  return s;
}

double EnergyFunctional::norm_V_sq(std::span<const double> u) const {
  const auto s = stencils(u);
  const auto w = grid_.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    sum += w[i] * (s.lap[i] * s.lap[i] + s.du[i] * s.du[i] + potential_[i] * u[i] * u[i]);
  }
  return sum;
}

double EnergyFunctional::phi(std::span<const double> u) const {
  require_size(u);
  return phi_term(grid_, problem_.rho, u);
}

EnergyBreakdown EnergyFunctional::energy(std::span<const double> u) const {
  const auto s = stencils(u);
  const auto w = grid_.weights();
  EnergyBreakdown e;
  for (std::size_t i = 0; i < u.size(); ++i) {
    e.quad_bilap += w[i] * s.lap[i] * s.lap[i];
    e.quad_grad += w[i] * s.du[i] * s.du[i];
    e.quad_pot += w[i] * potential_[i] * u[i] * u[i];
    e.nonlinear += w[i] * eval_nonlinearity(problem_.nonlinearity, u[i]).primitive;
  }
  e.phi = quasilinear_sums(grid_, problem_.rho, u, s.du).q;
  e.total = 0.5 * (e.quad_bilap + e.quad_grad + e.quad_pot) + problem_.lambda * e.phi - e.nonlinear;
  return e;
}

double EnergyFunctional::energy_difference(std::span<const double> v,
                                          std::span<const double> u) const {
  require_size(v);
  RadialField delta(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) delta[i] = v[i] - u[i];
  // Stencils of the difference itself: differencing the stencils of v and u
  // would bury a small change under rounding amplified by 1/h^2.
  const auto sd = stencils(delta);
  const auto su = stencils(u);
  const auto w = grid_.weights();
  const double lambda = problem_.lambda;
  const auto& nl = problem_.nonlinearity;
  const auto& rho = problem_.rho;

  // h(x) = rho'(x^2)^2 x^2 and h'(x).
  auto h = [&](double x) {
    const double d1 = rho_derivatives(rho, x * x).d1;
    return d1 * d1 * x * x;
  };
  auto dh = [&](double x) {
    const double x2 = x * x;
    const auto d = rho_derivatives(rho, x2);
    return 4.0 * d.d1 * d.d2 * x2 * x + 2.0 * d.d1 * d.d1 * x;
  };
  // fn(b) - fn(a); Simpson's rule on fn' when b is close to a.
  auto change = [](auto&& fn, auto&& dfn, double a, double b) {
    const double d = b - a;
    if (d == 0.0) return 0.0;
    if (std::abs(d) <= 1e-3 * std::max(std::abs(a), std::abs(b))) {
      return d / 6.0 * (dfn(a) + 4.0 * dfn(0.5 * (a + b)) + dfn(b));
    }
    return fn(b) - fn(a);
  };
  auto primitive = [&](double x) { return eval_nonlinearity(nl, x).primitive; };
  auto force = [&](double x) { return eval_nonlinearity(nl, x).f; };

  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double lap_sum = 2.0 * su.lap[i] + sd.lap[i];
    const double du_sum = 2.0 * su.du[i] + sd.du[i];
    double local = 0.5 * (sd.lap[i] * lap_sum + sd.du[i] * du_sum +
                          potential_[i] * delta[i] * (u[i] + v[i])) -
                   change(primitive, force, u[i], v[i]);
    if (lambda != 0.0) {
      // h(v) dv^2 - h(u) du^2 = h(v) (dv^2 - du^2) + du^2 (h(v) - h(u)).
      local += lambda * (h(v[i]) * sd.du[i] * du_sum + su.du[i] * su.du[i] * change(h, dh, u[i], v[i]));
    }
    sum += w[i] * local;
  }
  return sum;
}

RadialField EnergyFunctional::gradient(std::span<const double> u) const {
  const auto s = stencils(u);
  const auto w = grid_.weights();
  const std::size_t n = u.size();
  const double lambda = problem_.lambda;

  Eigen::VectorXd weighted_lap(static_cast<Eigen::Index>(n));
  Eigen::VectorXd weighted_du(static_cast<Eigen::Index>(n));
  RadialField g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    weighted_lap[k] = w[i] * s.lap[i];
    double flux = s.du[i];
    double local = potential_[i] * u[i] - eval_nonlinearity(problem_.nonlinearity, u[i]).f;
    if (lambda != 0.0 && u[i] != 0.0) {
      // d/du_i of lambda w_i q(u_i) du_i^2 with q(u) = rho'(u^2)^2 u^2; the du part
      // is routed through D^T below.
      const double u2 = u[i] * u[i];
      const auto d = rho_derivatives(problem_.rho, u2);
      const double q = d.d1 * d.d1 * u2;
      const double dq = 4.0 * d.d1 * d.d2 * u2 * u[i] + 2.0 * d.d1 * d.d1 * u[i];
      local += lambda * dq * s.du[i] * s.du[i];
      flux += 2.0 * lambda * q * s.du[i];
    }
    weighted_du[k] = w[i] * flux;
    g[i] = w[i] * local;
  }
  Map out(g.data(), static_cast<Eigen::Index>(n));
  out += laplacian_.transpose() * weighted_lap;
  out += derivative_.transpose() * weighted_du;
  g.back() = 0.0;
  return g;
}

double EnergyFunctional::nonlinear_pairing(std::span<const double> u) const {
  require_size(u);
  const auto w = grid_.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    sum += w[i] * eval_nonlinearity(problem_.nonlinearity, u[i]).f * u[i];
  }
  return sum;
}

double EnergyFunctional::nehari_value(std::span<const double> u) const {
  const double norm = norm_V_sq(u);
  const double pairing = nonlinear_pairing(u);
  if (problem_.lambda == 0.0) return norm - pairing;
  const auto du = radial_derivative(grid_, u);
  const auto q = quasilinear_sums(grid_, problem_.rho, u, du);
  return norm + 4.0 * problem_.lambda * (q.a + q.q) - pairing;
}

double EnergyFunctional::nehari_slope(std::span<const double> u) const {
  const double norm = norm_V_sq(u);
  const auto w = grid_.weights();
  double f_part = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto v = eval_nonlinearity(problem_.nonlinearity, u[i]);
    f_part += w[i] * (v.df * u[i] * u[i] + v.f * u[i]);
  }
  double quasi = 0.0;
  if (problem_.lambda != 0.0) {
    const auto du = radial_derivative(grid_, u);
    const auto q = quasilinear_sums(grid_, problem_.rho, u, du);
    // d/dt of 4 lambda (A(tu) + Q(tu)) at t = 1 with A ~ t^6 rho'rho''(t^2u^2)
    // and Q ~ t^4 rho'^2(t^2u^2).
    quasi = 4.0 * problem_.lambda * (2.0 * q.b + 2.0 * q.c + 6.0 * q.a) +
            16.0 * problem_.lambda * (q.a + q.q);
  }
  return 2.0 * norm + quasi - f_part;
}

ProofInequalities EnergyFunctional::proof_inequalities(std::span<const double> u) const {
  require_size(u);
  const auto du = radial_derivative(grid_, u);
  const auto q = quasilinear_sums(grid_, problem_.rho, u, du);
  return ProofInequalities{2.0 * q.b, q.q, q.a};
}

RayProfile EnergyFunctional::ray(std::span<const double> u) const {
  require_size(u);
  RayProfile ray;
  ray.lambda_ = problem_.lambda;
  ray.rho_ = &problem_.rho;
  ray.nonlinearity_ = &problem_.nonlinearity;
  ray.norm_sq_ = norm_V_sq(u);

  const auto w = grid_.weights();
  if (const auto degree = problem_.nonlinearity.homogeneity()) {
    ray.homogeneous_ = true;
    ray.degree_ = *degree;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const auto v = eval_nonlinearity(problem_.nonlinearity, u[i]);
      ray.primitive_sum_ += w[i] * v.primitive;
      ray.pairing_sum_ += w[i] * v.f * u[i];
    }
  } else {
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (w[i] == 0.0 || u[i] == 0.0) continue;
      ray.f_weight_.push_back(w[i]);
      ray.f_value_.push_back(u[i]);
    }
  }

  if (problem_.lambda != 0.0) {
    const auto du = radial_derivative(grid_, u);
    ray.rho_affine_ = rho_is_affine(problem_.rho);
    const double slope = ray.rho_affine_ ? rho_derivatives(problem_.rho, 0.0).d1 : 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double weight = w[i] * u[i] * u[i] * du[i] * du[i];
      if (weight == 0.0) continue;
      if (ray.rho_affine_) {
        ray.affine_q_ += slope * slope * weight;
      } else {
        ray.rho_weight_.push_back(weight);
        ray.rho_square_.push_back(u[i] * u[i]);
      }
    }
  }
  return ray;
}

Eigen::SparseMatrix<double> EnergyFunctional::quadratic_form_matrix(bool positive_part_only) const {
  const auto n = static_cast<Eigen::Index>(grid_.size());
  Eigen::VectorXd w = view(grid_.weights());
  Eigen::VectorXd wv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = potential_[static_cast<std::size_t>(i)];
    wv[i] = w[i] * (positive_part_only ? std::max(v, 0.0) : v);
  }
  Eigen::SparseMatrix<double> k = laplacian_.transpose() * w.asDiagonal() * laplacian_;
  k += derivative_.transpose() * w.asDiagonal() * derivative_;
  Eigen::SparseMatrix<double> diag(n, n);
  diag.reserve(Eigen::VectorXi::Constant(n, 1));
  for (Eigen::Index i = 0; i < n; ++i) diag.insert(i, i) = wv[i];
  k += diag;

  // Dirichlet node.
  const Eigen::Index e = n - 1;
  for (int outer = 0; outer < k.outerSize(); ++outer) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(k, outer); it; ++it) {
      if (it.row() == e || it.col() == e) it.valueRef() = (it.row() == it.col()) ? 1.0 : 0.0;
    }
  }
  k.prune(0.0);
  if (k.coeff(e, e) != 1.0) k.coeffRef(e, e) = 1.0;
  return k;
}

// ---------------------------------------------------------------------------

double RayProfile::energy(double t) const {
  const double t2 = t * t;
  double value = 0.5 * t2 * norm_sq_;
  if (lambda_ != 0.0) {
    double q = 0.0;
    if (rho_affine_) {
      q = affine_q_;
    } else {
      for (std::size_t i = 0; i < rho_weight_.size(); ++i) {
        const double d1 = rho_derivatives(*rho_, t2 * rho_square_[i]).d1;
        q += rho_weight_[i] * d1 * d1;
      }
    }
    value += lambda_ * t2 * t2 * q;
  }
  if (homogeneous_) {
    value -= std::pow(t, degree_) * primitive_sum_;
  } else {
    for (std::size_t i = 0; i < f_weight_.size(); ++i) {
      value -= f_weight_[i] * eval_nonlinearity(*nonlinearity_, t * f_value_[i]).primitive;
    }
  }
  return value;
}

double RayProfile::nehari(double t) const {
  const double t2 = t * t;
  double value = t2 * norm_sq_;
  if (lambda_ != 0.0) {
    double q = 0.0;
    double a = 0.0;
    if (rho_affine_) {
      q = affine_q_;
    } else {
      for (std::size_t i = 0; i < rho_weight_.size(); ++i) {
        const double s = t2 * rho_square_[i];
        const auto d = rho_derivatives(*rho_, s);
        q += rho_weight_[i] * d.d1 * d.d1;
        a += rho_weight_[i] * d.d1 * d.d2 * s;
      }
    }
    value += 4.0 * lambda_ * t2 * t2 * (a + q);
  }
  if (homogeneous_) {
    value -= std::pow(t, degree_) * pairing_sum_;
  } else {
    for (std::size_t i = 0; i < f_weight_.size(); ++i) {
      const double tu = t * f_value_[i];
      value -= f_weight_[i] * eval_nonlinearity(*nonlinearity_, tu).f * tu;
    }
  }
  return value;
}

double RayProfile::slope(double t) const {
  if (t == 0.0) return 0.0;
  return nehari(t) / t;
}

}  // namespace nehari
