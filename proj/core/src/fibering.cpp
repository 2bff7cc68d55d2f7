#include "nehari/fibering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nehari/sampling.hpp"

namespace nehari {

namespace {

double sup_norm(std::span<const double> u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

struct Root {
  double t = 0.0;
  double slope = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

Root bisect(const RayProfile& ray, double lo, double hi) {
  double s_lo = ray.slope(lo);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double s_mid = ray.slope(mid);
    if (s_mid == 0.0) return Root{mid, 0.0, lo, hi};
    if (sign_of(s_mid) == sign_of(s_lo)) {
      lo = mid;
      s_lo = s_mid;
    } else {
      hi = mid;
    }
  }
  const double s_hi = ray.slope(hi);
  if (std::abs(s_lo) <= std::abs(s_hi)) return Root{lo, s_lo, lo, hi};
  return Root{hi, s_hi, lo, hi};
}

}  // namespace

FiberingSample fibering_map(const EnergyFunctional& functional, std::span<const double> u,
                            double t) {
  if (sup_norm(u) == 0.0) throw ProjectionError("fibering map of the zero field");
  if (t < 0.0) throw std::invalid_argument("fibering map needs t >= 0");
  const auto ray = functional.ray(u);
  return FiberingSample{t, ray.energy(t), ray.slope(t)};
}

Projection project_to_nehari(const EnergyFunctional& functional, std::span<const double> u,
                             const ProjectionOptions& options) {
  if (!(sup_norm(u) > options.zero_floor)) {
    throw ProjectionError("cannot project a field with sup norm below the zero floor");
  }
  const auto ray = functional.ray(u);
  const auto ts = log_spaced(options.scan_lo, options.scan_hi, options.per_decade);

  // Brackets between consecutive nonzero-signed scan points; exact zeros on the
  // scan grid are roots in their own right.
  std::vector<Root> roots;
  int changes = 0;
  double last_t = 0.0;
  int last_sign = 0;
  bool zero_since_last = false;
  for (double t : ts) {
    const double s = ray.slope(t);
    const int sg = sign_of(s);
    if (sg == 0) {
      roots.push_back(Root{t, 0.0, t, t});
      zero_since_last = true;
      continue;
    }
    if (last_sign != 0 && sg != last_sign) {
      ++changes;
      if (!zero_since_last) roots.push_back(bisect(ray, last_t, t));
    }
    zero_since_last = false;
    last_t = t;
    last_sign = sg;
  }
  if (roots.empty()) {
    std::ostringstream os;
    os << "g'(t) keeps one sign on [" << options.scan_lo << ", " << options.scan_hi
       << "]; rescale the field";
    throw ProjectionError(os.str());
  }

  const Root* best = nullptr;
  double best_g = -HUGE_VAL;
  for (const auto& r : roots) {
    const double g = ray.energy(r.t);
    if (best == nullptr || g > best_g) {
      best = &r;
      best_g = g;
    }
  }

  Projection out;
  out.report.t_star = best->t;
  out.report.residual = std::abs(best->slope);
  out.report.t_lo = best->lo;
  out.report.t_hi = best->hi;
  out.report.critical_count = std::max(changes, static_cast<int>(roots.size()));
  out.report.within_tolerance =
      out.report.residual <= options.residual_tol * std::max(1.0, ray.norm_V_sq());
  out.field.assign(u.begin(), u.end());
  for (double& v : out.field) v *= best->t;
  return out;
}

std::vector<FiberingSample> fibering_table(const EnergyFunctional& functional,
                                           std::span<const double> u, double t_lo, double t_hi,
                                           int per_decade) {
  if (sup_norm(u) == 0.0) throw ProjectionError("fibering map of the zero field");
  const auto ray = functional.ray(u);
  std::vector<FiberingSample> rows;
  for (double t : log_spaced(t_lo, t_hi, per_decade)) {
    rows.push_back(FiberingSample{t, ray.energy(t), ray.slope(t)});
  }
  return rows;
}

}  // namespace nehari
