#include "nehari/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/SparseCholesky>

namespace nehari {

namespace {

double sup_norm(std::span<const double> u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Direction d = M^{-1} g for the chosen metric.
class DirectionSolver {
 public:
  DirectionSolver(const EnergyFunctional& functional, Preconditioner kind) {
    const auto& grid = functional.grid();
    if (kind == Preconditioner::kVForm) {
      if (factor(functional.quadratic_form_matrix(false))) {
        name_ = "v_form";
        return;
      }
      // V^- large enough to make K indefinite: use the V^+ form instead.
      if (factor(functional.quadratic_form_matrix(true))) {
        name_ = "v_plus_form";
        return;
      }
    }
    name_ = "nodal";
    inverse_weight_.resize(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
      // The origin carries no quadrature weight; borrow its neighbour's.
      const double w = i == 0 ? grid.weight(1) : grid.weight(i);
      inverse_weight_[i] = 1.0 / w;
    }
  }

  const std::string& name() const { return name_; }

  RadialField apply(const RadialField& g) const {
    RadialField d(g.size());
    if (factored_) {
      Eigen::Map<const Eigen::VectorXd> rhs(g.data(), static_cast<Eigen::Index>(g.size()));
      Eigen::VectorXd x = ldlt_.solve(rhs);
      for (size_t i = 0; i < d.size(); ++i) d[i] = x[static_cast<Eigen::Index>(i)];
    } else {
      for (size_t i = 0; i < d.size(); ++i) d[i] = g[i] * inverse_weight_[i];
    }
    d.back() = 0.0;
    return d;
  }

 private:
  bool factor(const Eigen::SparseMatrix<double>& k) {
    ldlt_.compute(k);
    if (ldlt_.info() != Eigen::Success) return false;
    if ((ldlt_.vectorD().array() <= 0.0).any()) return false;
    factored_ = true;
    return true;
  }

  std::string name_;
  bool factored_ = false;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  std::vector<double> inverse_weight_;
};

struct Descent {
  StartOutcome outcome;
  RadialField field;
  FiberingReport fibering;
};

Descent run_descent(const EnergyFunctional& functional, const DirectionSolver& directions,
                    const Projection& start, const SolverOptions& options) {
  Descent out;
  out.field = start.field;
  out.fibering = start.report;
  double energy = functional.energy(out.field).total;
  out.outcome.energy_history.push_back(energy);

  for (int iter = 0; iter < options.max_iters; ++iter) {
    const RadialField g = functional.gradient(out.field);
    out.outcome.grad_residual = sup_norm(g);
    if (out.outcome.grad_residual <= options.grad_tol) {
      out.outcome.converged = true;
      break;
    }
    RadialField d = directions.apply(g);
    double slope = dot(g, d);
    if (!(slope > 0.0)) {
      d = g;
      d.back() = 0.0;
      slope = dot(g, d);
    }

    double step = options.initial_step;
    bool accepted = false;
    RadialField trial(out.field.size());
    for (int b = 0; b < options.max_backtracks; ++b, step *= options.shrink) {
      for (size_t i = 0; i < trial.size(); ++i) trial[i] = out.field[i] - step * d[i];
      trial.back() = 0.0;
      Projection p;
      try {
        p = project_to_nehari(functional, trial, options.projection);
      } catch (const ProjectionError&) {
        continue;
      }
      const double change = functional.energy_difference(p.field, out.field);
      if (std::isfinite(change) && change <= -options.armijo_fraction * step * slope) {
        const double e = functional.energy(p.field).total;
        out.field = std::move(p.field);
        out.fibering = p.report;
        // Keep the recorded sequence monotone when the decrease is below the
        // rounding of the total.
        energy = std::min(energy, e);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.outcome.stagnated = true;
      break;
    }
    out.outcome.iterations = iter + 1;
    out.outcome.energy_history.push_back(energy);
  }
  if (!out.outcome.converged && !out.outcome.stagnated) {
    out.outcome.grad_residual = sup_norm(functional.gradient(out.field));
    out.outcome.converged = out.outcome.grad_residual <= options.grad_tol;
  }
  out.outcome.energy = energy;
  return out;
}

bool same_field(const RadialField& a, const RadialField& b) {
  const double scale = std::max(sup_norm(a), sup_norm(b));
  double diff = 0.0;
  for (size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  return diff <= 1e-10 * scale;
}

}  // namespace

void SolverOptions::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("solver: " + what); };
  if (max_iters < 0) fail("max_iters must be >= 0");
  if (!(grad_tol > 0.0)) fail("grad_tol must be > 0");
  if (!(nehari_tol > 0.0)) fail("nehari_tol must be > 0");
  if (!(initial_step > 0.0) || !std::isfinite(initial_step)) fail("initial_step must be > 0");
  if (!(shrink > 0.0 && shrink < 1.0)) fail("shrink must lie in (0, 1)");
  if (!(armijo_fraction > 0.0 && armijo_fraction < 1.0)) {
    fail("armijo_fraction must lie in (0, 1)");
  }
  if (max_backtracks < 1) fail("max_backtracks must be >= 1");
  for (double s : start_widths) {
    if (!(s > 0.0) || !std::isfinite(s)) fail("start widths must be > 0");
  }
  for (double a : start_amplitudes) {
    if (!(a > 0.0) || !std::isfinite(a)) fail("start amplitudes must be > 0");
  }
  if (!(start_perturbation >= 0.0)) fail("start_perturbation must be >= 0");
  if (start_widths.empty() != start_amplitudes.empty()) {
    fail("start widths and amplitudes must both be given or both be empty");
  }
  if (start_widths.empty() && extra_starts.empty()) fail("no starts");
  if (!(projection.scan_lo > 0.0 && projection.scan_lo < projection.scan_hi)) {
    fail("projection scan range must satisfy 0 < lo < hi");
  }
  if (projection.per_decade < 1) fail("projection per_decade must be >= 1");
}

bool Certificate::passed() const {
  return std::all_of(items.begin(), items.end(), [](const auto& item) { return item.passed; });
}

const CertificateItem* Certificate::find(std::string_view id) const {
  for (const auto& item : items) {
    if (item.id == id) return &item;
  }
  return nullptr;
}

std::vector<RadialField> make_starts(const RadialGrid& grid, const SolverOptions& options) {
  std::vector<RadialField> starts;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr int kModes = 4;
  for (double width : options.start_widths) {
    for (double amp : options.start_amplitudes) {
      double coeff[kModes] = {};
      if (options.start_perturbation > 0.0) {
        for (double& c : coeff) c = options.start_perturbation * normal(rng);
      }
      RadialField u = grid.sample([&](double r) {
        double bump = 1.0;
        for (int k = 0; k < kModes; ++k) {
          bump += coeff[k] * std::cos((k + 1) * std::numbers::pi * r / grid.r_max());
        }
        const double x = r / width;
        return amp * std::exp(-x * x) * bump;
      });
      enforce_boundary(u);
      starts.push_back(std::move(u));
    }
  }
  for (const auto& extra : options.extra_starts) {
    if (extra.size() != grid.size()) {
      throw std::invalid_argument("solver: extra start has the wrong number of nodes");
    }
    RadialField u = extra;
    enforce_boundary(u);
    starts.push_back(std::move(u));
  }
  return starts;
}

SolveResult solve_ground_state(const RadialGrid& grid, const ProblemSpec& spec,
                               const SolverOptions& options) {
  options.validate();
  SolveResult result;
  result.hypotheses = check_problem(spec, grid);
  if (!result.hypotheses.passed()) {
    if (!options.force) {
      std::ostringstream os;
      os << "hypothesis check failed:";
      for (const auto& h : result.hypotheses.results) {
        if (h.verdict == Verdict::kFail) os << ' ' << h.id;
      }
      throw HypothesisError(os.str(), result.hypotheses);
    }
    result.hypotheses_overridden = true;
  }

  const EnergyFunctional functional(grid, spec);
  const DirectionSolver directions(functional, options.preconditioner);
  result.preconditioner_used = directions.name();

  const auto starts = make_starts(grid, options);
  std::vector<Descent> runs(starts.size());
  std::vector<RadialField> projected(starts.size());
  for (size_t k = 0; k < starts.size(); ++k) {
    auto& outcome = runs[k].outcome;
    outcome.index = static_cast<int>(k);
    Projection p;
    try {
      p = project_to_nehari(functional, starts[k], options.projection);
    } catch (const ProjectionError& e) {
      outcome.failed = true;
      outcome.error = e.what();
      continue;
    }
    // Starts on the same ray share a projection and hence a whole trajectory.
    int twin = -1;
    for (size_t j = 0; j < k && twin < 0; ++j) {
      if (!runs[j].outcome.failed && runs[j].outcome.duplicate_of < 0 &&
          same_field(projected[j], p.field)) {
        twin = static_cast<int>(j);
      }
    }
    projected[k] = p.field;
    if (twin >= 0) {
      runs[k] = runs[static_cast<size_t>(twin)];
      runs[k].outcome.index = static_cast<int>(k);
      runs[k].outcome.duplicate_of = twin;
      continue;
    }
    runs[k] = run_descent(functional, directions, p, options);
    runs[k].outcome.index = static_cast<int>(k);
  }

  int winner = -1;
  for (size_t k = 0; k < runs.size(); ++k) {
    if (runs[k].outcome.failed) continue;
    if (winner < 0 || runs[k].outcome.energy < runs[static_cast<size_t>(winner)].outcome.energy) {
      winner = static_cast<int>(k);
    }
  }
  if (winner >= 0 && !runs[static_cast<size_t>(winner)].outcome.converged) {
    // Energies that agree to rounding do not rank starts; prefer one that met
    // the gradient tolerance.
    const double best = runs[static_cast<size_t>(winner)].outcome.energy;
    const double slack = 1e-12 * std::max(1.0, std::abs(best));
    for (size_t k = 0; k < runs.size(); ++k) {
      const auto& o = runs[k].outcome;
      if (!o.failed && o.converged && o.energy <= best + slack) {
        winner = static_cast<int>(k);
        break;
      }
    }
  }
  for (const auto& r : runs) result.starts.push_back(r.outcome);
  if (winner < 0) {
    std::ostringstream os;
    os << "no start could be projected onto the Nehari set";
    if (!runs.empty()) os << " (" << runs.front().outcome.error << ")";
    throw SolveError(os.str());
  }

  auto& best = runs[static_cast<size_t>(winner)];
  result.winner = winner;
  result.field = std::move(best.field);
  result.fibering = best.fibering;
  result.converged = best.outcome.converged;
  result.stagnated = best.outcome.stagnated;
  result.breakdown = functional.energy(result.field);
  result.energy_m = result.breakdown.total;
  result.norm_V_sq = functional.norm_V_sq(result.field);
  result.nehari_residual =
      result.norm_V_sq > 0.0 ? std::abs(functional.nehari_value(result.field)) / result.norm_V_sq
                             : 0.0;
  result.grad_residual = sup_norm(functional.gradient(result.field));
  const auto [lo, hi] = std::minmax_element(result.field.begin(), result.field.end());
  result.field_min = *lo;
  result.field_max = *hi;
  result.certificate = verify_solution(grid, spec, result, options);
  return result;
}

Certificate verify_solution(const RadialGrid& grid, const ProblemSpec& spec,
                            const SolveResult& result, const SolverOptions& options) {
  const EnergyFunctional functional(grid, spec);
  const auto& u = result.field;
  if (u.size() != grid.size()) {
    throw std::invalid_argument("verify_solution: field size does not match the grid");
  }
  Certificate cert;
  cert.hypotheses_overridden = result.hypotheses_overridden;
  auto add = [&](std::string id, std::string description, bool passed, double value,
                 double bound) {
    cert.items.push_back(CertificateItem{std::move(id), std::move(description), passed, value,
                                         bound});
  };

  const double norm = functional.norm_V_sq(u);
  const double j = functional.nehari_value(u);
  const double energy = functional.energy(u).total;
  const double pairing = functional.nonlinear_pairing(u);
  const double residual = norm > 0.0 ? std::abs(j) / norm : std::abs(j);
  add("nehari_residual", "|J(u)| / ||u||_V^2 within nehari_tol",
      residual <= options.nehari_tol, residual, options.nehari_tol);

  const double grad = sup_norm(functional.gradient(u));
  add("gradient", "sup norm of the energy gradient within grad_tol", grad <= options.grad_tol,
      grad, options.grad_tol);

  add("energy_lower_bound", "I(u) >= ||u||_V^2 / 4", energy >= 0.25 * norm - 1e-10, energy,
      0.25 * norm);

  add("norm_vs_pairing", "||u||_V^2 <= int f(u) u", norm <= pairing + 1e-8 * std::abs(pairing),
      norm, pairing);

  const double slope = norm > 0.0 ? functional.nehari_slope(u) : 0.0;
  add("nehari_slope", "J'(u)u < 0", slope < 0.0, slope, 0.0);

  add("energy_positive", "I(u) > 0", energy > 0.0, energy, 0.0);

  const auto decay = audit_decay(grid, u);
  add("decay", "tail sup beyond 0.9 r_max below 1e-6 of the peak", decay.ok, decay.tail_ratio,
      1e-6);
  return cert;
}

std::vector<SweepEntry> lambda_sweep(const RadialGrid& grid, const ProblemSpec& spec,
                                     const std::vector<double>& lambdas,
                                     const SolverOptions& options) {
  if (lambdas.empty()) throw std::invalid_argument("lambda sweep: empty lambda list");
  for (size_t k = 0; k < lambdas.size(); ++k) {
    if (!(lambdas[k] >= 0.0) || !std::isfinite(lambdas[k])) {
      throw std::invalid_argument("lambda sweep: lambdas must be finite and >= 0");
    }
    if (k > 0 && !(lambdas[k] > lambdas[k - 1])) {
      throw std::invalid_argument("lambda sweep: lambdas must be strictly ascending");
    }
  }
  std::vector<SweepEntry> out;
  std::optional<RadialField> previous;
  for (double lambda : lambdas) {
    SweepEntry entry;
    entry.lambda = lambda;
    SolverOptions local = options;
    if (previous) local.extra_starts.push_back(*previous);
    try {
      entry.result = solve_ground_state(grid, spec.with_lambda(lambda), local);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
    if (out.back().result) previous = out.back().result->field;
  }
  return out;
}

}  // namespace nehari
