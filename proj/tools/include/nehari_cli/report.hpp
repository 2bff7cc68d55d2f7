#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nehari/nehari.hpp"

namespace nehari::cli {

nlohmann::json to_json(const HypothesisReport& report);
nlohmann::json to_json(const Certificate& certificate);
nlohmann::json to_json(const EnergyBreakdown& breakdown);
nlohmann::json to_json(const FiberingReport& report);
nlohmann::json describe(const ProblemSpec& spec);

/// "certified", "stagnated" or "certificate_failed".
std::string solve_status(const SolveResult& result);

nlohmann::json diagnostics_json(const RadialGrid& grid, const ProblemSpec& spec,
                                const SolveResult& result);

/// r,u,du/dr,laplacian_u with 17 significant digits.
void write_solution_table(const std::filesystem::path& path, const RadialGrid& grid,
                          const RadialField& u);
RadialField read_solution_table(const std::filesystem::path& path);

void write_fibering_table(const std::filesystem::path& path, const std::vector<FiberingSample>& rows);
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace nehari::cli
