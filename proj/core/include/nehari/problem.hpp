#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nehari/radial_grid.hpp"

namespace nehari {

// ---------------------------------------------------------------------------
// Potential V(r)
// ---------------------------------------------------------------------------

struct ConstantProfile {};

/// V(r) = V_inf - c r^{-alpha} for r <= cutoff, V_inf beyond.
struct InversePowerProfile {
  double c = 1.0;
  double alpha = 1.0;
  double cutoff = 1.0;
};

/// Piecewise-linear through (radii[k], values[k]); V_inf past the last radius.
struct TabulatedProfile {
  std::vector<double> radii;
  std::vector<double> values;
};

struct CustomProfile {
  std::function<double(double)> value;
};

using PotentialProfile =
    std::variant<ConstantProfile, InversePowerProfile, TabulatedProfile, CustomProfile>;

struct PotentialSpec {
  double v_infinity = 1.0;
  PotentialProfile profile = ConstantProfile{};

  static PotentialSpec constant(double v_infinity);
  static PotentialSpec inverse_power(double v_infinity, double c, double alpha, double cutoff);
  static PotentialSpec tabulated(double v_infinity, std::vector<double> radii,
                                 std::vector<double> values);
  static PotentialSpec custom(double v_infinity, std::function<double(double)> value);
};

struct PotentialSample {
  double value = 0.0;
  double positive = 0.0;  // V+ = max(V, 0)
  double negative = 0.0;  // V- = max(-V, 0)
  bool regularized = false;
};

/// V at radius r. A non-finite value at r = 0 (singular profile) is replaced
/// by the value at r = spacing / 2 and flagged.
PotentialSample eval_potential(const PotentialSpec& spec, double r, double spacing);

struct SampledPotential {
  RadialField value;
  RadialField negative;
  bool origin_regularized = false;
};

SampledPotential sample_potential(const PotentialSpec& spec, const RadialGrid& grid);

// ---------------------------------------------------------------------------
// Nonlinearity f
// ---------------------------------------------------------------------------

struct NonlinearityValue {
  double f = 0.0;
  double df = 0.0;
  double primitive = 0.0;  // F(t) = int_0^t f
};

struct NonlinearitySpec {
  enum class Kind { kPower, kCustom };

  Kind kind = Kind::kPower;
  double m = 1.0;  // asymptotic slope in f(t) ~ m t^{p-1}
  double p = 5.0;
  std::function<NonlinearityValue(double)> custom;

  /// f(t) = m |t|^{p-2} t.
  static NonlinearitySpec power(double m, double p);
  /// Custom triple with declared growth exponent p.
  static NonlinearitySpec from_callback(double p, std::function<NonlinearityValue(double)> fn);

  /// Degree k with f(s t) t s = s^k f(t) t for s > 0, when the family has one.
  std::optional<double> homogeneity() const;
};

NonlinearityValue eval_nonlinearity(const NonlinearitySpec& spec, double t);

// ---------------------------------------------------------------------------
// Smoothing function rho
// ---------------------------------------------------------------------------

struct AffineRho {  // a + b s
  double a = 0.0;
  double b = 1.0;
};
struct SqrtShiftRho {};  // (1 + s)^{1/2}
struct AffinePlusSqrtRho {  // a + b s + (1 + s)^{1/2}
  double a = 0.0;
  double b = 1.0;
};
struct PowerShiftRho {  // (1 + s)^alpha
  double alpha = 0.5;
};
struct CustomRho {
  /// rho, rho', rho'', rho''', rho''''.
  std::array<std::function<double(double)>, 5> derivatives;
};

using RhoSpec = std::variant<AffineRho, SqrtShiftRho, AffinePlusSqrtRho, PowerShiftRho, CustomRho>;

/// rho^{(order)}(s), order in 0..4. Throws std::out_of_range otherwise.
double eval_rho(const RhoSpec& spec, double s, int order);

struct RhoDerivatives {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// rho', rho'', rho''' at s in one call; these are what the energy needs.
RhoDerivatives rho_derivatives(const RhoSpec& spec, double s);

/// True when rho' is constant and rho'' vanishes identically.
bool rho_is_affine(const RhoSpec& spec);

std::string rho_family_name(const RhoSpec& spec);

// ---------------------------------------------------------------------------
// Derivative consistency probes for user-supplied callbacks
// ---------------------------------------------------------------------------

struct ConsistencyProbe {
  double worst_relative_error = 0.0;
  double at = 0.0;  // sample point of the worst mismatch
  int order = 0;    // derivative order being checked
};

/// Compares central differences of rho^{(k)} against rho^{(k+1)}, k = 0..3,
/// on log-spaced s in [s_lo, s_hi].
ConsistencyProbe rho_consistency(const RhoSpec& spec, double s_lo = 1e-3, double s_hi = 1e6,
                                 int per_decade = 20);

/// Compares central differences of F against f (order 0) and of f against f'
/// (order 1) on t = +-log-spaced [t_lo, t_hi].
ConsistencyProbe nonlinearity_consistency(const NonlinearitySpec& spec, double t_lo = 1e-3,
                                          double t_hi = 1e3, int per_decade = 20);

// ---------------------------------------------------------------------------
// Problem
// ---------------------------------------------------------------------------

/// 3 <= N <= 6 for lambda > 0; any N >= 3 for lambda = 0.
bool admissible_dimension(int dim, double lambda);
DimensionPolicy dimension_policy(double lambda);

struct ProblemSpec {
  int dim = 3;
  double lambda = 0.0;
  PotentialSpec potential;
  NonlinearitySpec nonlinearity;
  RhoSpec rho = SqrtShiftRho{};

  /// Throws std::invalid_argument when lambda < 0 or dim is inadmissible.
  void validate() const;
  ProblemSpec with_lambda(double new_lambda) const;
};

}  // namespace nehari
