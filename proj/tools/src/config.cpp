#include "nehari_cli/config.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include <yaml-cpp/yaml.h>

namespace nehari::cli {

namespace {

std::string located(const std::string& source, int line, const std::string& message) {
  std::ostringstream os;
  os << source;
  if (line > 0) os << ':' << line;
  os << ": " << message;
  return os.str();
}

int line_of(const YAML::Node& node) {
  const auto mark = node.Mark();
  return mark.is_null() ? 0 : mark.line + 1;
}

/// A YAML mapping whose keys are consumed one by one; leftovers are errors.
class Block {
 public:
  Block(YAML::Node node, std::string path, const std::string& source)
      : node_(std::move(node)), path_(std::move(path)), source_(source) {
    if (!node_.IsMap()) fail(node_, "expected a mapping");
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (lines_.count(key)) fail(kv.first, "duplicate key '" + key + "'");
      lines_[key] = line_of(kv.first);
    }
  }

  bool has(const std::string& key) const { return lines_.count(key) > 0; }

  template <class T>
  T get(const std::string& key) {
    return convert<T>(key, require(key));
  }

  template <class T>
  T get_or(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return get<T>(key);
  }

  double positive(const std::string& key, double fallback) {
    const double v = get_or<double>(key, fallback);
    if (!(v > 0.0)) fail(node_[key], name(key) + " must be > 0");
    return v;
  }

  Block child(const std::string& key) { return Block(require(key), name(key), source_); }

  std::optional<Block> optional_child(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return child(key);
  }

  std::vector<double> numbers(const std::string& key) {
    const auto node = require(key);
    if (!node.IsSequence()) fail(node, name(key) + ": expected a list of numbers");
    std::vector<double> out;
    for (const auto& item : node) out.push_back(scalar<double>(item, name(key)));
    return out;
  }

  std::vector<std::string> strings(const std::string& key) {
    const auto node = require(key);
    if (!node.IsSequence()) fail(node, name(key) + ": expected a list");
    std::vector<std::string> out;
    for (const auto& item : node) out.push_back(scalar<std::string>(item, name(key)));
    return out;
  }

  /// Rejects every key that was not read.
  void finish() const {
    for (const auto& [key, line] : lines_) {
      if (!used_.count(key)) {
        throw ConfigError(source_, line, "unknown key '" + name(key) + "'");
      }
    }
  }

  [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
    throw ConfigError(source_, line_of(node), message);
  }

  [[noreturn]] void fail_key(const std::string& key, const std::string& message) const {
    const auto it = lines_.find(key);
    throw ConfigError(source_, it == lines_.end() ? line_of(node_) : it->second, message);
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  YAML::Node require(const std::string& key) {
    if (!has(key)) {
      throw ConfigError(source_, line_of(node_),
                        "missing required key '" + name(key) + "'");
    }
    used_[key] = true;
    return node_[key];
  }

  template <class T>
  T scalar(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + ": expected a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, what + ": cannot read '" + node.Scalar() + "' as " + type_name<T>());
    }
  }

  template <class T>
  T convert(const std::string& key, const YAML::Node& node) const {
    return scalar<T>(node, name(key));
  }

  template <class T>
  static const char* type_name() {
    if constexpr (std::is_same_v<T, bool>) return "a boolean";
    if constexpr (std::is_integral_v<T>) return "an integer";
    if constexpr (std::is_floating_point_v<T>) return "a number";
    return "a string";
  }

  YAML::Node node_;
  std::string path_;
  const std::string& source_;
  std::map<std::string, int> lines_;
  std::map<std::string, bool> used_;
};

PotentialSpec parse_potential(Block b) {
  const auto kind = b.get<std::string>("kind");
  const double v_inf = b.get_or<double>("v_infinity", 1.0);
  PotentialSpec spec;
  try {
    if (kind == "constant") {
      spec = PotentialSpec::constant(v_inf);
    } else if (kind == "inverse_power") {
      spec = PotentialSpec::inverse_power(v_inf, b.get<double>("c"), b.get<double>("alpha"),
                                          b.get_or<double>("cutoff", 1.0));
    } else if (kind == "tabulated") {
      spec = PotentialSpec::tabulated(v_inf, b.numbers("radii"), b.numbers("values"));
    } else {
      b.fail_key("kind", "unknown potential kind '" + kind +
                             "' (expected constant, inverse_power or tabulated)");
    }
  } catch (const std::invalid_argument& e) {
    b.fail_key("kind", e.what());
  }
  b.finish();
  return spec;
}

NonlinearitySpec parse_nonlinearity(Block b) {
  const auto kind = b.get<std::string>("kind");
  if (kind != "power") b.fail_key("kind", "unknown nonlinearity kind '" + kind + "' (expected power)");
  NonlinearitySpec spec;
  try {
    spec = NonlinearitySpec::power(b.get<double>("m"), b.get<double>("p"));
  } catch (const std::invalid_argument& e) {
    b.fail_key("kind", e.what());
  }
  b.finish();
  return spec;
}

RhoSpec parse_rho(Block b) {
  const auto kind = b.get<std::string>("kind");
  RhoSpec spec;
  if (kind == "affine") {
    spec = AffineRho{b.get<double>("a"), b.get<double>("b")};
  } else if (kind == "sqrt_shift") {
    spec = SqrtShiftRho{};
  } else if (kind == "affine_plus_sqrt") {
    spec = AffinePlusSqrtRho{b.get<double>("a"), b.get<double>("b")};
  } else if (kind == "power_shift") {
    const double alpha = b.get<double>("alpha");
    if (!(alpha > 0.0) || !(alpha <= 1.0)) b.fail_key("alpha", "rho.alpha must lie in (0, 1]");
    spec = PowerShiftRho{alpha};
  } else {
    b.fail_key("kind", "unknown rho kind '" + kind +
                           "' (expected affine, sqrt_shift, affine_plus_sqrt or power_shift)");
  }
  b.finish();
  return spec;
}

void parse_solver(Block b, SolverOptions& o) {
  o.max_iters = b.get_or<int>("max_iters", o.max_iters);
  o.grad_tol = b.positive("grad_tol", o.grad_tol);
  o.nehari_tol = b.positive("nehari_tol", o.nehari_tol);
  o.initial_step = b.positive("initial_step", o.initial_step);
  o.shrink = b.positive("shrink", o.shrink);
  o.armijo_fraction = b.positive("armijo_fraction", o.armijo_fraction);
  o.max_backtracks = b.get_or<int>("max_backtracks", o.max_backtracks);
  if (b.has("start_widths")) o.start_widths = b.numbers("start_widths");
  if (b.has("start_amplitudes")) o.start_amplitudes = b.numbers("start_amplitudes");
  o.start_perturbation = b.get_or<double>("start_perturbation", o.start_perturbation);
  o.seed = b.get_or<std::uint64_t>("seed", o.seed);
  if (b.has("preconditioner")) {
    const auto name = b.get<std::string>("preconditioner");
    if (name == "v_form") {
      o.preconditioner = Preconditioner::kVForm;
    } else if (name == "none") {
      o.preconditioner = Preconditioner::kNone;
    } else {
      b.fail_key("preconditioner", "unknown preconditioner '" + name + "' (expected v_form or none)");
    }
  }
  try {
    o.validate();
  } catch (const std::invalid_argument& e) {
    b.fail_key("max_iters", e.what());
  }
  b.finish();
}

void parse_output(Block b, OutputConfig& out) {
  if (b.has("directory")) out.directory = b.get<std::string>("directory");
  if (b.has("formats")) {
    out.solution = out.diagnostics = out.fibering = false;
    for (const auto& f : b.strings("formats")) {
      if (f == "solution") {
        out.solution = true;
      } else if (f == "diagnostics") {
        out.diagnostics = true;
      } else if (f == "fibering") {
        out.fibering = true;
      } else {
        b.fail_key("formats", "unknown output format '" + f +
                                  "' (expected solution, diagnostics or fibering)");
      }
    }
  }
  b.finish();
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(located(source, line, message)), line_(line) {}

RadialGrid RunConfig::grid() const {
  return RadialGrid::build(problem.dim, r_max, n, dimension_policy(problem.lambda));
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, e.mark.line + 1, e.msg);
  }
  if (!root.IsDefined() || root.IsNull()) throw ConfigError(source, 0, "empty config");

  RunConfig cfg;
  Block top(root, "", source);
  {
    Block p = top.child("problem");
    cfg.problem.dim = p.get<int>("dim");
    cfg.problem.lambda = p.get<double>("lambda");
    if (!(cfg.problem.lambda >= 0.0)) p.fail_key("lambda", "problem.lambda must be >= 0");
    if (!admissible_dimension(cfg.problem.dim, cfg.problem.lambda)) {
      p.fail_key("dim", "problem.dim must satisfy 3 <= dim <= 6 when lambda > 0, dim >= 3 otherwise");
    }
    cfg.problem.potential = parse_potential(p.child("potential"));
    cfg.problem.nonlinearity = parse_nonlinearity(p.child("nonlinearity"));
    cfg.problem.rho = parse_rho(p.child("rho"));
    p.finish();
  }
  if (auto g = top.optional_child("grid")) {
    cfg.r_max = g->positive("r_max", cfg.r_max);
    const auto n = g->get_or<long long>("n", static_cast<long long>(cfg.n));
    if (n < 16) g->fail_key("n", "grid.n must be >= 16");
    cfg.n = static_cast<std::size_t>(n);
    g->finish();
  }
  if (auto s = top.optional_child("solver")) parse_solver(*s, cfg.solver);
  if (auto o = top.optional_child("output")) parse_output(*o, cfg.output);
  top.finish();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot read config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

}  // namespace nehari::cli
