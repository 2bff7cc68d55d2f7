#include "nehari_cli/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nehari::cli {

namespace {

using nlohmann::json;

json number(double v) {
  // JSON has no NaN or infinity.
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

std::string format_row(std::initializer_list<double> values) {
  std::string line;
  char buf[40];
  bool first = true;
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.16e", v);
    if (!first) line += ',';
    line += buf;
    first = false;
  }
  line += '\n';
  return line;
}

void open_for_write(std::ofstream& out, const std::filesystem::path& path) {
  out.open(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

json to_json(const HypothesisReport& report) {
  json results = json::array();
  for (const auto& h : report.results) {
    json item{{"id", h.id}, {"statement", h.statement}, {"verdict", std::string(to_string(h.verdict))}};
    if (h.witness) {
      item["witness"] = {{"point", number(h.witness->point)},
                         {"lhs", number(h.witness->lhs)},
                         {"rhs", number(h.witness->rhs)},
                         {"relation", h.witness->relation}};
    }
    if (!h.note.empty()) item["note"] = h.note;
    results.push_back(std::move(item));
  }
  const auto& c = report.constants;
  json bounds = json::array();
  for (const auto& b : c.rho_bounds) bounds.push_back(optional_number(b));
  return json{{"passed", report.passed()},
              {"results", std::move(results)},
              {"constants",
               {{"v_minus_norm", optional_number(c.v_minus_norm)},
                {"sobolev", optional_number(c.sobolev)},
                {"delta_hat", optional_number(c.delta_hat)},
                {"m_hat", optional_number(c.m_hat)},
                {"rho_bounds", std::move(bounds)}}}};
}

json to_json(const Certificate& certificate) {
  json items = json::array();
  for (const auto& item : certificate.items) {
    items.push_back({{"id", item.id},
                     {"description", item.description},
                     {"passed", item.passed},
                     {"value", number(item.value)},
                     {"bound", number(item.bound)}});
  }
  return json{{"passed", certificate.passed()},
              {"hypotheses_overridden", certificate.hypotheses_overridden},
              {"items", std::move(items)}};
}

json to_json(const EnergyBreakdown& e) {
  return json{{"quad_bilap", number(e.quad_bilap)}, {"quad_grad", number(e.quad_grad)},
              {"quad_pot", number(e.quad_pot)},     {"phi", number(e.phi)},
              {"nonlinear", number(e.nonlinear)},   {"total", number(e.total)}};
}

json to_json(const FiberingReport& r) {
  return json{{"t_star", number(r.t_star)},     {"residual", number(r.residual)},
              {"t_lo", number(r.t_lo)},         {"t_hi", number(r.t_hi)},
              {"critical_count", r.critical_count}, {"within_tolerance", r.within_tolerance}};
}

json describe(const ProblemSpec& spec) {
  json potential{{"v_infinity", spec.potential.v_infinity}};
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantProfile>) {
          potential["kind"] = "constant";
        } else if constexpr (std::is_same_v<T, InversePowerProfile>) {
          potential["kind"] = "inverse_power";
          potential["c"] = p.c;
          potential["alpha"] = p.alpha;
          potential["cutoff"] = p.cutoff;
        } else if constexpr (std::is_same_v<T, TabulatedProfile>) {
          potential["kind"] = "tabulated";
          potential["radii"] = p.radii;
          potential["values"] = p.values;
        } else {
          potential["kind"] = "custom";
        }
      },
      spec.potential.profile);

  json nonlinearity;
  if (spec.nonlinearity.kind == NonlinearitySpec::Kind::kPower) {
    nonlinearity = {{"kind", "power"}, {"m", spec.nonlinearity.m}, {"p", spec.nonlinearity.p}};
  } else {
    nonlinearity = {{"kind", "custom"}, {"p", spec.nonlinearity.p}};
  }

  json rho{{"kind", rho_family_name(spec.rho)}};
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, AffineRho> || std::is_same_v<T, AffinePlusSqrtRho>) {
          rho["a"] = r.a;
          rho["b"] = r.b;
        } else if constexpr (std::is_same_v<T, PowerShiftRho>) {
          rho["alpha"] = r.alpha;
        }
      },
      spec.rho);

  return json{{"dim", spec.dim},
              {"lambda", spec.lambda},
              {"potential", std::move(potential)},
              {"nonlinearity", std::move(nonlinearity)},
              {"rho", std::move(rho)}};
}

std::string solve_status(const SolveResult& result) {
  if (result.stagnated) return "stagnated";
  if (!result.certificate.passed()) return "certificate_failed";
  return "certified";
}

json diagnostics_json(const RadialGrid& grid, const ProblemSpec& spec, const SolveResult& result) {
  json starts = json::array();
  for (const auto& s : result.starts) {
    json item{{"index", s.index},
              {"failed", s.failed},
              {"energy", s.failed ? json(nullptr) : number(s.energy)},
              {"iterations", s.iterations},
              {"grad_residual", number(s.grad_residual)},
              {"converged", s.converged},
              {"stagnated", s.stagnated}};
    if (s.duplicate_of >= 0) item["duplicate_of"] = s.duplicate_of;
    if (!s.error.empty()) item["error"] = s.error;
    starts.push_back(std::move(item));
  }
  const auto& winner = result.starts.at(static_cast<size_t>(result.winner));
  return json{{"status", solve_status(result)},
              {"problem", describe(spec)},
              {"grid", {{"dim", grid.dim()}, {"r_max", grid.r_max()}, {"n", grid.size()},
                        {"spacing", grid.spacing()}}},
              {"energy_m", number(result.energy_m)},
              {"norm_V_sq", number(result.norm_V_sq)},
              {"nehari_residual", number(result.nehari_residual)},
              {"grad_residual", number(result.grad_residual)},
              {"breakdown", to_json(result.breakdown)},
              {"field_min", number(result.field_min)},
              {"field_max", number(result.field_max)},
              {"fibering", to_json(result.fibering)},
              {"preconditioner", result.preconditioner_used},
              {"winner", result.winner},
              {"winner_iterations", winner.iterations},
              {"converged", result.converged},
              {"stagnated", result.stagnated},
              {"hypotheses_overridden", result.hypotheses_overridden},
              {"starts", std::move(starts)},
              {"certificate", to_json(result.certificate)}};
}

void write_solution_table(const std::filesystem::path& path, const RadialGrid& grid,
                          const RadialField& u) {
  const auto du = radial_derivative(grid, u);
  auto lap = apply_laplacian(grid, u);
  lap.back() = 0.0;  // Navier condition, as in the energy
  std::ofstream out;
  open_for_write(out, path);
  out << "r,u,du/dr,laplacian_u\n";
  for (size_t i = 0; i < u.size(); ++i) out << format_row({grid.node(i), u[i], du[i], lap[i]});
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

RadialField read_solution_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "r,u,du/dr,laplacian_u") {
    throw std::runtime_error(path.string() + ": unexpected header");
  }
  RadialField u;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string r, value;
    if (!std::getline(row, r, ',') || !std::getline(row, value, ',')) {
      throw std::runtime_error(path.string() + ": malformed row");
    }
    u.push_back(std::stod(value));
  }
  return u;
}

void write_fibering_table(const std::filesystem::path& path,
                          const std::vector<FiberingSample>& rows) {
  std::ofstream out;
  open_for_write(out, path);
  out << "t,g,g_prime\n";
  for (const auto& s : rows) out << format_row({s.t, s.g, s.slope});
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  std::ofstream out;
  open_for_write(out, path);
  out << value.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace nehari::cli
