#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hexroute/hexroute.hpp"

namespace hexroute::cli {

struct ScenarioConfig {
    std::optional<std::filesystem::path> chart;
    std::optional<std::filesystem::path> matrix;
    double size = 0.002;
    std::optional<GeoPoint> start;
    std::optional<GeoPoint> goal;    // plan destination
    std::optional<GeoPoint> target;  // tour end point; falls back to goal
    std::vector<GeoPoint> tasks;
    GridMode grid = GridMode::kHex;
    HeuristicMode heuristic = HeuristicMode::kGuided;
    std::optional<double> min_turn_radius;
    std::optional<double> arrived_radius;
    AcoConfig aco;
    std::filesystem::path out = "out";

    TurnSpec turn_spec() const;
};

/// Parse a scenario file. Relative chart and matrix paths resolve against the
/// file's directory.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);

GeoPoint parse_point(const std::string& text);
GridMode parse_grid_mode(const std::string& text);
HeuristicMode parse_heuristic_mode(const std::string& text);

void cmd_model(const ScenarioConfig& config, std::ostream& log);
/// Returns false when no path exists (reported on `log`).
bool cmd_plan(const ScenarioConfig& config, std::ostream& log);
void cmd_tour(const ScenarioConfig& config, std::ostream& log);

/// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hexroute::cli
