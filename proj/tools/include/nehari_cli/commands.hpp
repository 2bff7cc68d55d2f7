#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nehari::cli {

enum ExitCode : int {
  kExitCertified = 0,
  kExitConfigError = 1,
  kExitHypothesisFailed = 2,
  kExitNotCertified = 3,  // stagnation, failed certificate or no projectable start
};

struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;  // overrides output.directory
  std::optional<std::uint64_t> seed;         // overrides solver.seed
  bool force = false;
};

int cmd_check(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_solve(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommandOptions& opts, const std::string& lambdas, std::ostream& out,
              std::ostream& err);

/// Comma-separated lambda list; throws std::invalid_argument on bad input.
std::vector<double> parse_lambda_list(const std::string& csv);

/// Full command line, args[0] being the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nehari::cli
