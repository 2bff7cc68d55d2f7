#include "nehari/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nehari/sampling.hpp"

namespace nehari {

namespace {

constexpr double kSampleLo = 1e-6;
constexpr double kSampleHi = 1e6;
constexpr int kPerDecade = 400;
constexpr double kRoundoff = 1e-12;
// |log10 slope| above which a sampled quantity is treated as still drifting
// at the edge of the sampling window.
constexpr double kTrendSlope = 0.1;

bool at_least(double lhs, double rhs) { return lhs - rhs >= -kRoundoff * (1.0 + std::abs(rhs)); }

double log_slope(double from, double to, double decades) {
  const double a = std::abs(from);
  const double b = std::abs(to);
  if (a == 0.0 && b == 0.0) return 0.0;
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  if (b == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log10(b / a) / decades;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

HypothesisResult make(std::string id, std::string statement) {
  HypothesisResult r;
  r.id = std::move(id);
  r.statement = std::move(statement);
  return r;
}

void fail(HypothesisResult& r, double point, double lhs, double rhs, std::string relation) {
  if (r.verdict == Verdict::kFail) return;  // keep the first witness
  r.verdict = Verdict::kFail;
  r.witness = Witness{point, lhs, rhs, std::move(relation)};
}

void warn(HypothesisResult& r, std::string note) {
  if (r.verdict == Verdict::kPass) r.verdict = Verdict::kPassWithWarning;
  if (!r.note.empty()) r.note += "; ";
  r.note += note;
}

std::vector<double> sample_magnitudes() { return log_spaced(kSampleLo, kSampleHi, kPerDecade); }

// ---------------------------------------------------------------------------

HypothesisResult check_f2(const NonlinearitySpec& spec, int dim, double& delta_hat) {
  auto r = make("f2", "f'(t)t^2 - f(t)t >= delta |t|^p, delta > 0, with the admissible p range");
  const double p = spec.p;
  if (!(p > 4.0)) {
    fail(r, p, p, 4.0, "p > 4");
  } else if (dim > 4 && !(p < 2.0 * dim / (dim - 4.0))) {
    fail(r, p, p, 2.0 * dim / (dim - 4.0), "p < 2N/(N-4)");
  } else if (dim == 4) {
    warn(r, "the exponent range is not stated for N = 4; accepted p > 4");
  }

  auto ratio = [&](double t) {
    const auto v = eval_nonlinearity(spec, t);
    return (v.df * t * t - v.f * t) / std::pow(std::abs(t), p);
  };

  delta_hat = std::numeric_limits<double>::infinity();
  for (double mag : sample_magnitudes()) {
    for (double t : {mag, -mag}) {
      const double q = ratio(t);
      if (!(q > 0.0)) {
        const auto v = eval_nonlinearity(spec, t);
        fail(r, t, v.df * t * t - v.f * t, 0.0, "f'(t)t^2 - f(t)t > 0");
      }
      if (!std::isnan(q)) delta_hat = std::min(delta_hat, q);
    }
  }
  for (double sign : {1.0, -1.0}) {
    const double top = ratio(sign * kSampleHi);
    const double top_slope = log_slope(ratio(sign * kSampleHi / 10.0), top, 1.0);
    if (top_slope < -kTrendSlope) {
      fail(r, sign * kSampleHi, top, 0.0,
           "(f't^2 - ft)/|t|^p decays like |t|^" + format_number(top_slope) +
               " as |t| -> inf, so no delta > 0 bounds it");
    }
    const double bottom = ratio(sign * kSampleLo);
    const double bottom_slope = log_slope(bottom, ratio(sign * kSampleLo * 10.0), 1.0);
    if (bottom_slope > kTrendSlope) {
      fail(r, sign * kSampleLo, bottom, 0.0,
           "(f't^2 - ft)/|t|^p vanishes like |t|^" + format_number(bottom_slope) +
               " as t -> 0, so no delta > 0 bounds it");
    }
  }
  return r;
}

HypothesisResult check_f4(const NonlinearitySpec& spec, double& m_hat) {
  auto r = make("f4", "f(t)/t^{p-1} -> m > 0 as t -> inf");
  auto quotient = [&](double t) { return eval_nonlinearity(spec, t).f / std::pow(t, spec.p - 1.0); };
  const double hi = quotient(kSampleHi);
  const double lo = quotient(kSampleHi / 100.0);
  m_hat = hi;
  if (!(hi > 0.0)) {
    fail(r, kSampleHi, hi, 0.0, "f(T)/T^{p-1} > 0");
    return r;
  }
  const double slope = log_slope(lo, hi, 2.0);
  if (!(std::abs(slope) < 0.01)) {
    fail(r, kSampleHi, hi, lo,
         "f(T)/T^{p-1} still drifts like T^" + format_number(slope) +
             " over the top two decades; no positive limit");
  }
  return r;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kPassWithWarning: return "pass_with_warning";
    case Verdict::kFail: return "fail";
  }
  return "unknown";
}

bool HypothesisReport::passed() const {
  return std::none_of(results.begin(), results.end(),
                      [](const HypothesisResult& r) { return r.verdict == Verdict::kFail; });
}

const HypothesisResult* HypothesisReport::find(std::string_view id) const {
  for (const auto& r : results) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

void HypothesisReport::merge(const HypothesisReport& other) {
  results.insert(results.end(), other.results.begin(), other.results.end());
  auto take = [](std::optional<double>& into, const std::optional<double>& from) {
    if (from) into = from;
  };
  take(constants.v_minus_norm, other.constants.v_minus_norm);
  take(constants.sobolev, other.constants.sobolev);
  take(constants.delta_hat, other.constants.delta_hat);
  take(constants.m_hat, other.constants.m_hat);
  for (std::size_t i = 0; i < constants.rho_bounds.size(); ++i) {
    take(constants.rho_bounds[i], other.constants.rho_bounds[i]);
  }
}

double sobolev_constant(int dim) {
  if (dim < 3) throw std::invalid_argument("Sobolev constant needs N >= 3");
  const double n = dim;
  return std::numbers::pi * n * (n - 2.0) *
         std::pow(std::tgamma(0.5 * n) / std::tgamma(n), 2.0 / n);
}

HypothesisReport check_potential(const PotentialSpec& spec, const RadialGrid& grid) {
  HypothesisReport report;
  const auto sampled = sample_potential(spec, grid);

  auto v1 = make("V1", "V radial with V(r) -> V_inf > 0");
  if (!(spec.v_infinity > 0.0)) {
    fail(v1, 0.0, spec.v_infinity, 0.0, "V_inf > 0");
  } else {
    const double tol = 1e-3 * spec.v_infinity;
    const auto n = grid.size();
    for (std::size_t i = n - std::max<std::size_t>(1, n / 20); i < n; ++i) {
      const double gap = std::abs(sampled.value[i] - spec.v_infinity);
      if (!(gap < tol)) {
        fail(v1, grid.node(i), gap, tol, "|V(r) - V_inf| < 1e-3 V_inf on the last 5% of nodes");
        break;
      }
    }
  }
  report.results.push_back(std::move(v1));

  auto v2 = make("V2", "|V^-|_{N/2} < S");
  const double norm = lp_norm(grid, sampled.negative, 0.5 * grid.dim());
  const double s = sobolev_constant(grid.dim());
  report.constants.v_minus_norm = norm;
  report.constants.sobolev = s;
  if (!(norm < s)) fail(v2, 0.0, norm, s, "|V^-|_{N/2} < S");
  if (sampled.origin_regularized) {
    v2.note = "V is singular at r = 0; the origin node uses V(h/2)";
  }
  report.results.push_back(std::move(v2));
  return report;
}

HypothesisReport check_nonlinearity(const NonlinearitySpec& spec, int dim) {
  HypothesisReport report;

  auto f1 = make("f1", "f(0) = f'(0) = 0");
  const auto at_zero = eval_nonlinearity(spec, 0.0);
  if (!(std::abs(at_zero.f) <= kRoundoff)) fail(f1, 0.0, at_zero.f, 0.0, "f(0) = 0");
  if (!(std::abs(at_zero.df) <= kRoundoff)) fail(f1, 0.0, at_zero.df, 0.0, "f'(0) = 0");
  report.results.push_back(std::move(f1));

  double delta_hat = 0.0;
  report.results.push_back(check_f2(spec, dim, delta_hat));
  report.constants.delta_hat = delta_hat;

  auto f3 = make("f3", "f(t)t/4 - F(t) >= 0");
  auto mono = make("f_monotone", "f(t)/t increasing for t > 0");
  double previous = -std::numeric_limits<double>::infinity();
  for (double mag : sample_magnitudes()) {
    for (double t : {mag, -mag}) {
      const auto v = eval_nonlinearity(spec, t);
      const double lhs = 0.25 * v.f * t - v.primitive;
      if (!(lhs >= -kRoundoff * (1.0 + std::abs(v.primitive)))) {
        fail(f3, t, 0.25 * v.f * t, v.primitive, "f(t)t/4 >= F(t)");
      }
    }
    const double q = eval_nonlinearity(spec, mag).f / mag;
    if (!at_least(q, previous)) fail(mono, mag, q, previous, "f(t)/t non-decreasing");
    previous = q;
  }
  report.results.push_back(std::move(f3));

  double m_hat = 0.0;
  report.results.push_back(check_f4(spec, m_hat));
  report.constants.m_hat = m_hat;
  report.results.push_back(std::move(mono));
  return report;
}

HypothesisReport check_rho(const RhoSpec& spec) {
  HypothesisReport report;
  std::vector<double> samples{0.0};
  for (double s : sample_magnitudes()) samples.push_back(s);

  auto r1 = make("rho1", "rho continuous, C^4 on (0, inf)");
  for (double s : samples) {
    for (int k = 0; k <= 4; ++k) {
      if (s == 0.0 && k > 0) continue;
      const double v = eval_rho(spec, s, k);
      if (!std::isfinite(v)) fail(r1, s, v, 0.0, "rho^(" + std::to_string(k) + ") finite");
    }
  }
  const auto probe = rho_consistency(spec);
  if (!(probe.worst_relative_error < 1e-4)) {
    fail(r1, probe.at, probe.worst_relative_error, 1e-4,
         "central difference of rho^(" + std::to_string(probe.order) + ") matches rho^(" +
             std::to_string(probe.order + 1) + ")");
  }
  report.results.push_back(std::move(r1));

  auto r2 = make("rho2", "|rho^(i)(s)| <= C_i, i = 1..4");
  auto r3 = make("rho3", "|s rho'(s) rho''(s)| <= C_5");
  auto bounded = [&](HypothesisResult& r, auto&& fn, std::size_t slot, const std::string& what) {
    double sup = 0.0;
    for (double s : samples) {
      const double v = std::abs(fn(s));
      if (!std::isfinite(v)) {
        fail(r, s, v, 0.0, what + " finite");
        continue;
      }
      sup = std::max(sup, v);
    }
    report.constants.rho_bounds[slot] = sup;
    const double top_slope = log_slope(fn(kSampleHi / 10.0), fn(kSampleHi), 1.0);
    if (top_slope > kTrendSlope) {
      fail(r, kSampleHi, std::abs(fn(kSampleHi)), std::abs(fn(kSampleHi / 10.0)),
           what + " grows like s^" + format_number(top_slope) + "; unbounded");
    }
    const double bottom_slope = log_slope(fn(kSampleLo * 10.0), fn(kSampleLo), 1.0);
    if (bottom_slope > kTrendSlope) {
      fail(r, kSampleLo, std::abs(fn(kSampleLo)), std::abs(fn(kSampleLo * 10.0)),
           what + " blows up as s -> 0");
    }
  };
  for (int i = 1; i <= 4; ++i) {
    bounded(r2, [&](double s) { return eval_rho(spec, s, i); }, static_cast<std::size_t>(i - 1),
            "rho^(" + std::to_string(i) + ")");
  }
  bounded(r3, [&](double s) { return s * eval_rho(spec, s, 1) * eval_rho(spec, s, 2); }, 4,
          "s rho' rho''");
  report.results.push_back(std::move(r2));
  report.results.push_back(std::move(r3));

  auto r4 = make("rho4", "rho'(s) >= -sqrt(2) rho''(s) s >= 0");
  auto r5 = make("rho5", "2 rho''(s) + rho'''(s) s <= 0");
  for (double s : samples) {
    const double d1 = eval_rho(spec, s, 1);
    const double d2 = eval_rho(spec, s, 2);
    const double d3 = eval_rho(spec, s, 3);
    const double middle = -std::numbers::sqrt2 * d2 * s;
    if (!at_least(d1, middle)) fail(r4, s, d1, middle, "rho'(s) >= -sqrt(2) rho''(s) s");
    if (!at_least(middle, 0.0)) fail(r4, s, middle, 0.0, "-sqrt(2) rho''(s) s >= 0");
    const double lhs = 2.0 * d2 + d3 * s;
    if (!(lhs <= kRoundoff * (1.0 + std::abs(2.0 * d2) + std::abs(d3 * s)))) {
      fail(r5, s, lhs, 0.0, "2 rho''(s) + rho'''(s) s <= 0");
    }
  }
  report.results.push_back(std::move(r4));
  report.results.push_back(std::move(r5));

  auto family = make("rho_family", "parameters inside the closed-form admissible range");
  const double alpha_min = 1.0 - 1.0 / std::numbers::sqrt2;
  if (const auto* a = std::get_if<AffineRho>(&spec)) {
    if (!(a->a >= 0.0)) fail(family, a->a, a->a, 0.0, "a >= 0");
    if (!(a->b >= 0.0)) fail(family, a->b, a->b, 0.0, "b >= 0");
  } else if (const auto* a = std::get_if<AffinePlusSqrtRho>(&spec)) {
    if (!(a->a >= 0.0)) fail(family, a->a, a->a, 0.0, "a >= 0");
    if (!(a->b >= 0.0)) fail(family, a->b, a->b, 0.0, "b >= 0");
  } else if (const auto* pw = std::get_if<PowerShiftRho>(&spec)) {
    if (!(pw->alpha >= alpha_min)) fail(family, pw->alpha, pw->alpha, alpha_min, "alpha >= 1 - 1/sqrt(2)");
    if (!(pw->alpha <= 1.0)) fail(family, pw->alpha, pw->alpha, 1.0, "alpha <= 1");
  } else if (std::holds_alternative<CustomRho>(spec)) {
    family.note = "custom rho: sampled checks only";
  }
  report.results.push_back(std::move(family));
  return report;
}

HypothesisReport check_problem(const ProblemSpec& spec, const RadialGrid& grid) {
  HypothesisReport report;
  auto dim = make("dim", "3 <= N <= 6 (any N >= 3 when lambda = 0)");
  if (!admissible_dimension(spec.dim, spec.lambda)) {
    fail(dim, spec.dim, spec.dim, 6.0, "N admissible for lambda");
  }
  if (grid.dim() != spec.dim) fail(dim, grid.dim(), grid.dim(), spec.dim, "grid dimension = N");
  report.results.push_back(std::move(dim));

  report.merge(check_potential(spec.potential, grid));
  report.merge(check_nonlinearity(spec.nonlinearity, spec.dim));

  auto rho = check_rho(spec.rho);
  if (spec.lambda == 0.0) {
    for (auto& r : rho.results) {
      if (r.verdict == Verdict::kFail) {
        r.verdict = Verdict::kPassWithWarning;
        r.note = "rho does not enter the lambda = 0 problem";
      }
    }
  }
  report.merge(rho);
  return report;
}

}  // namespace nehari
