#pragma once

#include <optional>
#include <string>
#include <vector>

#include "otg/types.hpp"

namespace otg::io {

struct Waypoint {
    std::vector<KinematicState> target;
    std::optional<std::vector<Limits>> limits;  // per-waypoint override
};

/// Parsed problem file: one segment (current -> target) plus an optional
/// chain of further waypoints.
struct Problem {
    InputParameters input;
    double control_cycle = 1e-3;
    std::vector<Waypoint> waypoints;
};

struct LoadResult {
    bool ok = false;
    std::string error;
};

LoadResult load_problem_file(const std::string& path, Problem& out);
LoadResult parse_problem(const std::string& json_text, Problem& out);

std::string problem_to_json(const InputParameters& input);
bool write_problem_file(const std::string& path, const InputParameters& input);

}  // namespace otg::io
