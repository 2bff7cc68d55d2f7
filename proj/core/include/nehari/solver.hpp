#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nehari/energy.hpp"
#include "nehari/fibering.hpp"
#include "nehari/hypotheses.hpp"

namespace nehari {

/// Metric used to turn the nodal gradient into a descent direction.
enum class Preconditioner {
  kNone,   // quadrature-weighted nodal product: d = W^{-1} g
  kVForm,  // discrete V-form: d = K^{-1} g (falls back to the V^+ form if K is indefinite)
};

struct SolverOptions {
  int max_iters = 5000;
  double grad_tol = 1e-7;   // sup norm of the nodal gradient
  double nehari_tol = 1e-8;  // |J(u)| / ||u||_V^2
  double initial_step = 1.0;
  double shrink = 0.5;
  double armijo_fraction = 1e-4;
  int max_backtracks = 60;

  /// Gaussian starts exp(-(r/sigma)^2), one per (width, amplitude) pair.
  std::vector<double> start_widths{0.5, 1.0, 2.0, 4.0};
  std::vector<double> start_amplitudes{1.0, 2.0};
  /// Appended after the Gaussian starts.
  std::vector<RadialField> extra_starts;
  /// Relative size of a smooth seeded perturbation applied to the Gaussian
  /// starts; 0 disables it.
  double start_perturbation = 0.0;
  std::uint64_t seed = 0;

  Preconditioner preconditioner = Preconditioner::kVForm;
  /// Solve even when the hypothesis check fails; recorded in the result.
  bool force = false;
  ProjectionOptions projection;

  void validate() const;
};

class HypothesisError : public std::runtime_error {
 public:
  HypothesisError(const std::string& what, HypothesisReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const HypothesisReport& report() const { return report_; }

 private:
  HypothesisReport report_;
};

class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StartOutcome {
  int index = 0;
  /// Index of an earlier start whose Nehari projection is the same field.
  int duplicate_of = -1;
  bool failed = false;
  std::string error;
  double energy = 0.0;
  double grad_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool stagnated = false;
  /// Energy after the initial projection and after every accepted step.
  std::vector<double> energy_history;
};

struct CertificateItem {
  std::string id;
  std::string description;
  bool passed = false;
  double value = 0.0;
  double bound = 0.0;
};

struct Certificate {
  std::vector<CertificateItem> items;
  bool hypotheses_overridden = false;

  bool passed() const;
  const CertificateItem* find(std::string_view id) const;
};

struct SolveResult {
  RadialField field;
  double energy_m = 0.0;
  double norm_V_sq = 0.0;
  double nehari_residual = 0.0;  // |J(u)| / ||u||_V^2
  double grad_residual = 0.0;    // sup |gradient|
  EnergyBreakdown breakdown;
  FiberingReport fibering;  // projection of the winning start's final iterate
  double field_min = 0.0;
  double field_max = 0.0;

  std::vector<StartOutcome> starts;
  int winner = -1;
  bool converged = false;
  bool stagnated = false;
  bool hypotheses_overridden = false;
  std::string preconditioner_used;

  HypothesisReport hypotheses;
  Certificate certificate;
};

/// Default Gaussian starts for the options, plus extra_starts.
std::vector<RadialField> make_starts(const RadialGrid& grid, const SolverOptions& options);

/**
 * Minimizes the energy over the Nehari set from every start.
 *
 * Each start is projected onto the Nehari set, then iterated: the nodal
 * gradient is preconditioned into a direction d, and a step s is accepted by
 * Armijo backtracking on s -> I(project(u - s d)). Iteration stops when the
 * gradient sup norm reaches grad_tol, max_iters is hit, or backtracking is
 * exhausted (stagnation). The winner is the start with the lowest energy.
 *
 * Throws HypothesisError when the hypothesis check fails and options.force is
 * false, and SolveError when no start can be projected.
 */
SolveResult solve_ground_state(const RadialGrid& grid, const ProblemSpec& spec,
                               const SolverOptions& options = {});

/// Recomputes the solution-level invariants on result.field.
Certificate verify_solution(const RadialGrid& grid, const ProblemSpec& spec,
                            const SolveResult& result, const SolverOptions& options = {});

struct SweepEntry {
  double lambda = 0.0;
  std::optional<SolveResult> result;
  std::string error;
};

/// Solves for each lambda in ascending order, adding the previous solution as
/// a warm start. Per-lambda failures are recorded and the sweep continues.
std::vector<SweepEntry> lambda_sweep(const RadialGrid& grid, const ProblemSpec& spec,
                                     const std::vector<double>& lambdas,
                                     const SolverOptions& options = {});

}  // namespace nehari
