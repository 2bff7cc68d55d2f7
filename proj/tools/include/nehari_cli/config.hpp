#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "nehari/problem.hpp"
#include "nehari/radial_grid.hpp"
#include "nehari/solver.hpp"

namespace nehari::cli {

/// Config problem, prefixed with "<source>:<line>: " when a line is known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct OutputConfig {
  std::filesystem::path directory = "out";
  bool solution = true;
  bool diagnostics = true;
  bool fibering = false;
};

struct RunConfig {
  ProblemSpec problem;
  double r_max = 20.0;
  std::size_t n = 2001;
  SolverOptions solver;
  OutputConfig output;

  RadialGrid grid() const;
};

/// Parses the YAML schema documented in docs/config.md. Unknown keys, missing
/// required keys, wrong types and out-of-range values are ConfigErrors.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace nehari::cli
