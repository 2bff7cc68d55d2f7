#include "nehari_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "nehari_cli/config.hpp"
#include "nehari_cli/report.hpp"

namespace nehari::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  all hypotheses pass (check) or every solve is certified (solve, sweep)\n"
    "  1  config or command-line error, including a non-ascending --lambdas list\n"
    "  2  a hypothesis fails and --force was not given; nothing is solved\n"
    "  3  the solver stagnated, the solution certificate failed, or no start\n"
    "     could be projected onto the Nehari set\n";

struct Loaded {
  RunConfig config;
  fs::path out_dir;
};

std::optional<Loaded> load(const CommandOptions& opts, std::ostream& err) {
  try {
    Loaded l{load_config(opts.config), {}};
    l.out_dir = opts.out ? *opts.out : l.config.output.directory;
    if (opts.seed) l.config.solver.seed = *opts.seed;
    l.config.solver.force = opts.force;
    return l;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  }
  return std::nullopt;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
}

void print_hypotheses(const HypothesisReport& report, std::ostream& out) {
  for (const auto& h : report.results) {
    out << "  " << h.id << ": " << to_string(h.verdict);
    if (h.witness && h.verdict == Verdict::kFail) {
      out << " (at " << h.witness->point << ": " << h.witness->lhs << ' ' << h.witness->relation
          << ' ' << h.witness->rhs << ')';
    }
    if (!h.note.empty()) out << " [" << h.note << ']';
    out << '\n';
  }
}

json hypotheses_certificate(const ProblemSpec& spec, const HypothesisReport& report) {
  return json{{"problem", describe(spec)}, {"hypotheses", to_json(report)}};
}

/// Writes certificate.json and the configured formats for one solve.
void write_solve_outputs(const fs::path& dir, const RunConfig& cfg, const RadialGrid& grid,
                         const ProblemSpec& spec, const SolveResult& result) {
  ensure_directory(dir);
  json cert = hypotheses_certificate(spec, result.hypotheses);
  cert["status"] = solve_status(result);
  cert["solution"] = to_json(result.certificate);
  write_json(dir / "certificate.json", cert);
  if (cfg.output.solution) write_solution_table(dir / "solution.csv", grid, result.field);
  if (cfg.output.diagnostics) {
    write_json(dir / "diagnostics.json", diagnostics_json(grid, spec, result));
  }
  if (cfg.output.fibering) {
    const EnergyFunctional functional(grid, spec);
    write_fibering_table(dir / "fibering.csv",
                         fibering_table(functional, result.field, 1e-2, 1e2, 40));
  }
}

void print_solve_summary(const SolveResult& result, std::ostream& out) {
  out << "  status: " << solve_status(result) << '\n';
  char line[160];
  std::snprintf(line, sizeof line, "  energy_m = %.12g  norm_V_sq = %.12g\n", result.energy_m,
                result.norm_V_sq);
  out << line;
  std::snprintf(line, sizeof line,
                "  nehari_residual = %.3g  grad_residual = %.3g  winner = start %d\n",
                result.nehari_residual, result.grad_residual, result.winner);
  out << line;
  for (const auto& item : result.certificate.items) {
    if (!item.passed) out << "  certificate item failed: " << item.id << '\n';
  }
  if (result.hypotheses_overridden) out << "  hypothesis check overridden by --force\n";
}

}  // namespace

std::vector<double> parse_lambda_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size() || !std::isfinite(v)) {
      throw std::invalid_argument("cannot read '" + item + "' as a lambda value");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty lambda list");
  return out;
}

int cmd_check(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  auto loaded = load(opts, err);
  if (!loaded) return kExitConfigError;
  try {
    const auto grid = loaded->config.grid();
    const auto report = check_problem(loaded->config.problem, grid);
    ensure_directory(loaded->out_dir);
    write_json(loaded->out_dir / "certificate.json",
               hypotheses_certificate(loaded->config.problem, report));
    out << "hypotheses:\n";
    print_hypotheses(report, out);
    out << (report.passed() ? "all hypotheses pass\n" : "hypothesis check failed\n");
    return report.passed() ? kExitCertified : kExitHypothesisFailed;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

int cmd_solve(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  auto loaded = load(opts, err);
  if (!loaded) return kExitConfigError;
  const auto& cfg = loaded->config;
  try {
    const auto grid = cfg.grid();
    SolveResult result;
    try {
      result = solve_ground_state(grid, cfg.problem, cfg.solver);
    } catch (const HypothesisError& e) {
      ensure_directory(loaded->out_dir);
      write_json(loaded->out_dir / "certificate.json",
                 hypotheses_certificate(cfg.problem, e.report()));
      err << e.what() << " (use --force to solve anyway)\n";
      print_hypotheses(e.report(), err);
      return kExitHypothesisFailed;
    } catch (const SolveError& e) {
      err << "solve failed: " << e.what() << '\n';
      return kExitNotCertified;
    }
    write_solve_outputs(loaded->out_dir, cfg, grid, cfg.problem, result);
    out << "solve (lambda = " << cfg.problem.lambda << "):\n";
    print_solve_summary(result, out);
    return solve_status(result) == "certified" ? kExitCertified : kExitNotCertified;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

int cmd_sweep(const CommandOptions& opts, const std::string& lambdas_csv, std::ostream& out,
              std::ostream& err) {
  std::vector<double> lambdas;
  try {
    lambdas = parse_lambda_list(lambdas_csv);
  } catch (const std::invalid_argument& e) {
    err << "--lambdas: " << e.what() << '\n';
    return kExitConfigError;
  }
  for (size_t k = 0; k < lambdas.size(); ++k) {
    if (lambdas[k] < 0.0 || (k > 0 && !(lambdas[k] > lambdas[k - 1]))) {
      err << "--lambdas: values must be >= 0 and strictly ascending\n";
      return kExitConfigError;
    }
  }
  auto loaded = load(opts, err);
  if (!loaded) return kExitConfigError;
  const auto& cfg = loaded->config;
  try {
    for (double lambda : lambdas) {
      if (!admissible_dimension(cfg.problem.dim, lambda)) {
        err << "config error: dimension " << cfg.problem.dim << " is not admissible at lambda = "
            << lambda << '\n';
        return kExitConfigError;
      }
    }
    const RadialGrid grid = RadialGrid::build(cfg.problem.dim, cfg.r_max, cfg.n,
                                              dimension_policy(lambdas.back()));
    bool gate_failed = false;
    for (double lambda : lambdas) {
      const auto report = check_problem(cfg.problem.with_lambda(lambda), grid);
      if (!report.passed()) {
        err << "hypothesis check failed at lambda = " << lambda << ":\n";
        print_hypotheses(report, err);
        gate_failed = true;
      }
    }
    if (gate_failed && !cfg.solver.force) {
      err << "use --force to sweep anyway\n";
      return kExitHypothesisFailed;
    }

    const auto entries = lambda_sweep(grid, cfg.problem, lambdas, cfg.solver);
    ensure_directory(loaded->out_dir);
    std::ofstream branch(loaded->out_dir / "branch.csv", std::ios::binary | std::ios::trunc);
    if (!branch) throw std::runtime_error("cannot write branch.csv");
    branch << "lambda,energy_m,norm_V_sq,nehari_residual,status\n";
    bool all_certified = true;
    char row[256];
    char name[32];
    for (size_t k = 0; k < entries.size(); ++k) {
      const auto& e = entries[k];
      std::snprintf(name, sizeof name, "lambda_%03zu", k);
      out << name << " (lambda = " << e.lambda << "):\n";
      if (!e.result) {
        std::snprintf(row, sizeof row, "%.16e,nan,nan,nan,error\n", e.lambda);
        branch << row;
        out << "  error: " << e.error << '\n';
        all_certified = false;
        continue;
      }
      const auto spec = cfg.problem.with_lambda(e.lambda);
      write_solve_outputs(loaded->out_dir / name, cfg, grid, spec, *e.result);
      const auto status = solve_status(*e.result);
      std::snprintf(row, sizeof row, "%.16e,%.16e,%.16e,%.16e,%s\n", e.lambda, e.result->energy_m,
                    e.result->norm_V_sq, e.result->nehari_residual, status.c_str());
      branch << row;
      print_solve_summary(*e.result, out);
      all_certified = all_certified && status == "certified";
    }
    return all_certified ? kExitCertified : kExitNotCertified;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial ground states of a fourth-order quasilinear Schrodinger problem,\n"
               "computed by minimization over the Nehari manifold.",
               "nehari"};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);

  CommandOptions opts;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string lambdas;
  auto add_common = [&](CLI::App* sub, bool solving) {
    sub->add_option("--config", opts.config, "YAML run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    if (solving) {
      sub->add_flag("--force", opts.force, "solve even when a hypothesis fails");
      sub->add_option("--seed", seed, "seed for the start perturbation (overrides solver.seed)");
    }
  };
  auto* check = app.add_subcommand("check", "check the existence hypotheses for a config");
  add_common(check, false);
  auto* solve = app.add_subcommand("solve", "compute and certify a ground state");
  add_common(solve, true);
  auto* sweep = app.add_subcommand("sweep", "solve along an ascending list of lambdas");
  add_common(sweep, true);
  sweep->add_option("--lambdas", lambdas, "comma-separated ascending lambda values")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitCertified : kExitConfigError;
  }
  if (!out_dir.empty()) opts.out = out_dir;
  if (app.got_subcommand(check)) return cmd_check(opts, out, err);
  if ((solve->count("--seed") + sweep->count("--seed")) > 0) opts.seed = seed;
  if (app.got_subcommand(solve)) return cmd_solve(opts, out, err);
  return cmd_sweep(opts, lambdas, out, err);
}

}  // namespace nehari::cli
