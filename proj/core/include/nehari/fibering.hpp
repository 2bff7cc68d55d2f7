#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nehari/energy.hpp"

namespace nehari {

/// Thrown when g'(t) never changes sign on the scan range, or u = 0.
class ProjectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FiberingSample {
  double t = 0.0;
  double g = 0.0;       // I(t u)
  double slope = 0.0;   // g'(t) = J(t u)/t
};

struct FiberingReport {
  double t_star = 0.0;
  double residual = 0.0;  // |g'(t_star)|
  double t_lo = 0.0;
  double t_hi = 0.0;
  int critical_count = 0;  // sign changes of g' on the scan grid
  bool within_tolerance = false;
};

struct ProjectionOptions {
  double scan_lo = 1e-6;
  double scan_hi = 1e6;
  int per_decade = 60;
  /// Residual bound relative to max(1, ||u||_V^2).
  double residual_tol = 1e-10;
  /// Sup-norm floor below which u is treated as zero.
  double zero_floor = 1e-12;
};

struct Projection {
  FiberingReport report;
  RadialField field;  // t_star u
};

/// g(t) = I(t u) and g'(t). Throws ProjectionError when u = 0.
FiberingSample fibering_map(const EnergyFunctional& functional, std::span<const double> u,
                            double t);

/**
 * Scales u onto the Nehari set.
 *
 * g' is scanned on a geometric grid, every sign change is bisected, and the
 * critical point with the largest g (the global maximum of the fibering map
 * among the brackets) is selected.
 */
Projection project_to_nehari(const EnergyFunctional& functional, std::span<const double> u,
                             const ProjectionOptions& options = {});

/// (t, g, g') on a geometric grid, for plotting the fibering map.
std::vector<FiberingSample> fibering_table(const EnergyFunctional& functional,
                                           std::span<const double> u, double t_lo, double t_hi,
                                           int per_decade);

}  // namespace nehari
