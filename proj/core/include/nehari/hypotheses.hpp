#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nehari/problem.hpp"
#include "nehari/radial_grid.hpp"

namespace nehari {

enum class Verdict { kPass, kPassWithWarning, kFail };

std::string_view to_string(Verdict v);

/// A sample where an inequality fails, with both sides evaluated.
struct Witness {
  double point = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string relation;
};

struct HypothesisResult {
  std::string id;  // "V1", "V2", "f1".."f4", "f_monotone", "rho1".."rho5", "rho_family"
  std::string statement;
  Verdict verdict = Verdict::kPass;
  std::optional<Witness> witness;
  std::string note;
};

struct EstimatedConstants {
  std::optional<double> v_minus_norm;  // |V^-|_{N/2}
  std::optional<double> sobolev;       // S
  std::optional<double> delta_hat;     // largest delta validating (f2) on samples
  std::optional<double> m_hat;         // limit of f(T)/T^{p-1}
  /// sup |rho^{(i)}| for i = 1..4 in slots 0..3, sup |s rho' rho''| in slot 4.
  std::array<std::optional<double>, 5> rho_bounds;
};

struct HypothesisReport {
  std::vector<HypothesisResult> results;
  EstimatedConstants constants;

  /// No verdict is kFail.
  bool passed() const;
  const HypothesisResult* find(std::string_view id) const;
  void merge(const HypothesisReport& other);
};

/// Best constant of D^{1,2} -> L^{2*}: pi N (N-2) (Gamma(N/2)/Gamma(N))^{2/N}.
double sobolev_constant(int dim);

/// (V1) tail check over the last 5% of nodes and (V2) |V^-|_{N/2} < S, both
/// on the solver's grid and quadrature.
HypothesisReport check_potential(const PotentialSpec& spec, const RadialGrid& grid);

/// (f1)-(f4) and monotonicity of f(t)/t for t > 0.
HypothesisReport check_nonlinearity(const NonlinearitySpec& spec, int dim);

/// (rho1)-(rho5) by sampling, plus the closed-form parameter ranges of the
/// built-in families.
HypothesisReport check_rho(const RhoSpec& spec);

/// All of the above. With lambda = 0 rho does not enter the equation, so rho
/// failures are downgraded to warnings.
HypothesisReport check_problem(const ProblemSpec& spec, const RadialGrid& grid);

}  // namespace nehari
