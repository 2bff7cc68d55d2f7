#include "nehari/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nehari/sampling.hpp"

namespace nehari {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double raw_potential(const PotentialSpec& spec, double r) {
  return std::visit(
      Overloaded{
          [&](const ConstantProfile&) { return spec.v_infinity; },
          [&](const InversePowerProfile& p) {
            if (r > p.cutoff) return spec.v_infinity;
            return spec.v_infinity - p.c * std::pow(r, -p.alpha);
          },
          [&](const TabulatedProfile& t) {
            if (t.radii.empty() || r > t.radii.back()) return spec.v_infinity;
            if (r <= t.radii.front()) return t.values.front();
            const auto hi = std::upper_bound(t.radii.begin(), t.radii.end(), r);
            const auto k = static_cast<std::size_t>(hi - t.radii.begin());
            const double r0 = t.radii[k - 1];
            const double r1 = t.radii[k];
            const double s = (r - r0) / (r1 - r0);
            return (1.0 - s) * t.values[k - 1] + s * t.values[k];
          },
          [&](const CustomProfile& c) { return c.value(r); },
      },
      spec.profile);
}

// (1 + s)^alpha derivative of the given order.
double shifted_power(double alpha, double s, int order) {
  double coeff = 1.0;
  for (int k = 0; k < order; ++k) coeff *= alpha - k;
  if (coeff == 0.0) return 0.0;
  return coeff * std::pow(1.0 + s, alpha - order);
}

double sqrt_shift(double s, int order) {
  const double x = 1.0 + s;
  const double root = std::sqrt(x);
  switch (order) {
    case 0: return root;
    case 1: return 0.5 / root;
    case 2: return -0.25 / (x * root);
    case 3: return 0.375 / (x * x * root);
    default: return -0.9375 / (x * x * x * root);
  }
}

double affine(double a, double b, double s, int order) {
  if (order == 0) return a + b * s;
  if (order == 1) return b;
  return 0.0;
}

}  // namespace

PotentialSpec PotentialSpec::constant(double v_infinity) {
  return PotentialSpec{v_infinity, ConstantProfile{}};
}

PotentialSpec PotentialSpec::inverse_power(double v_infinity, double c, double alpha,
                                           double cutoff) {
  if (!(c > 0.0)) throw std::invalid_argument("inverse_power needs c > 0");
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("inverse_power needs 0 < alpha < 2");
  if (!(cutoff > 0.0)) throw std::invalid_argument("inverse_power needs cutoff > 0");
  return PotentialSpec{v_infinity, InversePowerProfile{c, alpha, cutoff}};
}

PotentialSpec PotentialSpec::tabulated(double v_infinity, std::vector<double> radii,
                                       std::vector<double> values) {
  if (radii.size() != values.size() || radii.size() < 2) {
    throw std::invalid_argument("tabulated potential needs matching radii/values, at least 2");
  }
  if (!std::is_sorted(radii.begin(), radii.end()) ||
      std::adjacent_find(radii.begin(), radii.end()) != radii.end()) {
    throw std::invalid_argument("tabulated radii must be strictly increasing");
  }
  return PotentialSpec{v_infinity, TabulatedProfile{std::move(radii), std::move(values)}};
}

PotentialSpec PotentialSpec::custom(double v_infinity, std::function<double(double)> value) {
  return PotentialSpec{v_infinity, CustomProfile{std::move(value)}};
}

PotentialSample eval_potential(const PotentialSpec& spec, double r, double spacing) {
  if (r < 0.0) throw std::invalid_argument("potential evaluated at negative radius");
  PotentialSample out;
  out.value = raw_potential(spec, r);
  if (!std::isfinite(out.value) && r == 0.0) {
    out.value = raw_potential(spec, 0.5 * spacing);
    out.regularized = true;
  }
  out.positive = std::max(out.value, 0.0);
  out.negative = std::max(-out.value, 0.0);
  return out;
}

SampledPotential sample_potential(const PotentialSpec& spec, const RadialGrid& grid) {
  SampledPotential out;
  out.value.resize(grid.size());
  out.negative.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto s = eval_potential(spec, grid.node(i), grid.spacing());
    out.value[i] = s.value;
    out.negative[i] = s.negative;
    out.origin_regularized = out.origin_regularized || s.regularized;
  }
  return out;
}

NonlinearitySpec NonlinearitySpec::power(double m, double p) {
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("power nonlinearity needs m > 0");
  if (!(p >= 2.0) || !std::isfinite(p)) throw std::invalid_argument("power nonlinearity needs p >= 2");
  NonlinearitySpec spec;
  spec.kind = Kind::kPower;
  spec.m = m;
  spec.p = p;
  return spec;
}

NonlinearitySpec NonlinearitySpec::from_callback(double p,
                                                 std::function<NonlinearityValue(double)> fn) {
  if (!fn) throw std::invalid_argument("custom nonlinearity needs a callback");
  NonlinearitySpec spec;
  spec.kind = Kind::kCustom;
  spec.m = 0.0;
  spec.p = p;
  spec.custom = std::move(fn);
  return spec;
}

std::optional<double> NonlinearitySpec::homogeneity() const {
  if (kind == Kind::kPower) return p;
  return std::nullopt;
}

NonlinearityValue eval_nonlinearity(const NonlinearitySpec& spec, double t) {
  if (spec.kind == NonlinearitySpec::Kind::kCustom) return spec.custom(t);
  const double a = std::abs(t);
  const double pow_pm2 = std::pow(a, spec.p - 2.0);
  NonlinearityValue out;
  out.f = spec.m * pow_pm2 * t;
  out.df = spec.m * (spec.p - 1.0) * pow_pm2;
  out.primitive = spec.m / spec.p * pow_pm2 * a * a;
  return out;
}

double eval_rho(const RhoSpec& spec, double s, int order) {
  if (order < 0 || order > 4) throw std::out_of_range("rho derivative order must be 0..4");
  return std::visit(
      Overloaded{
          [&](const AffineRho& r) { return affine(r.a, r.b, s, order); },
          [&](const SqrtShiftRho&) { return sqrt_shift(s, order); },
          [&](const AffinePlusSqrtRho& r) { return affine(r.a, r.b, s, order) + sqrt_shift(s, order); },
          [&](const PowerShiftRho& r) { return shifted_power(r.alpha, s, order); },
          [&](const CustomRho& r) { return r.derivatives[static_cast<std::size_t>(order)](s); },
      },
      spec);
}

RhoDerivatives rho_derivatives(const RhoSpec& spec, double s) {
  return std::visit(
      Overloaded{
          [&](const AffineRho& r) { return RhoDerivatives{r.b, 0.0, 0.0}; },
          [&](const SqrtShiftRho&) {
            const double x = 1.0 + s;
            const double inv_root = 1.0 / std::sqrt(x);
            const double d1 = 0.5 * inv_root;
            return RhoDerivatives{d1, -0.5 * d1 / x, 0.75 * d1 / (x * x)};
          },
          [&](const AffinePlusSqrtRho& r) {
            const double x = 1.0 + s;
            const double d1 = 0.5 / std::sqrt(x);
            return RhoDerivatives{r.b + d1, -0.5 * d1 / x, 0.75 * d1 / (x * x)};
          },
          [&](const PowerShiftRho& r) {
            const double x = 1.0 + s;
            const double d1 = r.alpha * std::pow(x, r.alpha - 1.0);
            const double d2 = d1 * (r.alpha - 1.0) / x;
            return RhoDerivatives{d1, d2, d2 * (r.alpha - 2.0) / x};
          },
          [&](const CustomRho& r) {
            return RhoDerivatives{r.derivatives[1](s), r.derivatives[2](s), r.derivatives[3](s)};
          },
      },
      spec);
}

bool rho_is_affine(const RhoSpec& spec) {
  if (std::holds_alternative<AffineRho>(spec)) return true;
  if (const auto* p = std::get_if<PowerShiftRho>(&spec)) return p->alpha == 1.0 || p->alpha == 0.0;
  return false;
}

std::string rho_family_name(const RhoSpec& spec) {
  return std::visit(Overloaded{
                        [](const AffineRho&) { return std::string("affine"); },
                        [](const SqrtShiftRho&) { return std::string("sqrt_shift"); },
                        [](const AffinePlusSqrtRho&) { return std::string("affine_plus_sqrt"); },
                        [](const PowerShiftRho&) { return std::string("power_shift"); },
                        [](const CustomRho&) { return std::string("custom"); },
                    },
                    spec);
}

namespace {

double relative_gap(double approx, double exact) {
  const double scale = std::max({std::abs(exact), std::abs(approx), 1e-300});
  return std::abs(approx - exact) / scale;
}

void record(ConsistencyProbe& probe, double gap, double at, int order) {
  if (gap > probe.worst_relative_error || !std::isfinite(gap)) {
    probe.worst_relative_error = std::isfinite(gap) ? gap : HUGE_VAL;
    probe.at = at;
    probe.order = order;
  }
}

}  // namespace

ConsistencyProbe rho_consistency(const RhoSpec& spec, double s_lo, double s_hi, int per_decade) {
  ConsistencyProbe probe;
  for (double s : log_spaced(s_lo, s_hi, per_decade)) {
    const double h = 1e-3 * s;
    for (int k = 0; k < 4; ++k) {
      const double fd = (eval_rho(spec, s + h, k) - eval_rho(spec, s - h, k)) / (2.0 * h);
      record(probe, relative_gap(fd, eval_rho(spec, s, k + 1)), s, k);
    }
  }
  return probe;
}

ConsistencyProbe nonlinearity_consistency(const NonlinearitySpec& spec, double t_lo, double t_hi,
                                          int per_decade) {
  ConsistencyProbe probe;
  for (double mag : log_spaced(t_lo, t_hi, per_decade)) {
    for (double t : {mag, -mag}) {
      const double h = 1e-4 * mag;
      const auto plus = eval_nonlinearity(spec, t + h);
      const auto minus = eval_nonlinearity(spec, t - h);
      const auto mid = eval_nonlinearity(spec, t);
      record(probe, relative_gap((plus.primitive - minus.primitive) / (2.0 * h), mid.f), t, 0);
      record(probe, relative_gap((plus.f - minus.f) / (2.0 * h), mid.df), t, 1);
    }
  }
  return probe;
}

bool admissible_dimension(int dim, double lambda) {
  if (dim < 3) return false;
  return lambda == 0.0 || dim <= 6;
}

DimensionPolicy dimension_policy(double lambda) {
  return lambda == 0.0 ? DimensionPolicy::kSemilinear : DimensionPolicy::kQuasilinear;
}

void ProblemSpec::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be finite and >= 0");
  }
  if (!admissible_dimension(dim, lambda)) {
    throw std::invalid_argument("dimension " + std::to_string(dim) +
                                " not admissible for lambda = " + std::to_string(lambda));
  }
  if (!(potential.v_infinity > 0.0)) throw std::invalid_argument("V_infinity must be > 0");
}

ProblemSpec ProblemSpec::with_lambda(double new_lambda) const {
  ProblemSpec copy = *this;
  copy.lambda = new_lambda;
  return copy;
}

}  // namespace nehari
