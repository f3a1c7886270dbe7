#pragma once

#include <optional>
#include <vector>

#include "otg/profile.hpp"
#include "otg/types.hpp"

namespace otg {

/// Identifies one row of the profile-type table: a jerk pattern plus the
/// combination of saturated limits.
struct ProfileType {
    Pattern pattern = Pattern::kUDDU;
    unsigned limits = 0;
};

enum class StepPhase { kStep1, kStep2 };

/// Outcome of validate_profile; on rejection `reason` names the violated rule.
struct ProfileCheck {
    bool ok = true;
    const char* reason = "";
    explicit operator bool() const { return ok; }
};

/// Clamp tiny negative durations, re-integrate the boundary states and check:
/// non-negative steps, boundary accelerations within limits, per-step velocity
/// extrema within limits, terminal state at xf. Mutates the candidate
/// (clamping + re-finalization).
ProfileCheck validate_profile(Profile& candidate, const KinematicState& x0,
                              const KinematicState& xf, const Limits& limits);

/// Solve one profile-type row. Step-1 rows use fixed_jerk (= j_max);
/// Step-2 rows additionally receive the required total duration and may
/// reduce the jerk magnitude below fixed_jerk or move the velocity plateau
/// off its limit. Returns raw candidates (not yet validated).
std::vector<Profile> solve_profile_type(const ProfileType& ptype, Direction dir, StepPhase phase,
                                        const KinematicState& x0, const KinematicState& xf,
                                        const Limits& limits, double fixed_jerk,
                                        std::optional<double> duration = std::nullopt);

/// Valid extremal profiles of one degree of freedom, deduplicated and sorted
/// by total duration.
struct ExtremalSet {
    std::vector<Profile> profiles;  // ascending duration
    double t_min = 0.0;
    bool ok = false;

    const Profile& fastest() const { return profiles.front(); }
};

/// Step 1: enumerate all valid extremal profiles across both directions with
/// jerk magnitude j_max, validate, deduplicate merged profile types by total
/// duration, and report the minimum duration.
ExtremalSet enumerate_extremal(const KinematicState& x0, const KinematicState& xf,
                               const Limits& limits);

/// Identifier of the solver system a profile-type row dispatches to. Rows
/// whose closing condition zeroes a step collapse onto the same system (the
/// no-plateau UDUD rows); the mapping is documented in docs/derivations.md.
/// Returns an empty view for rows that do not belong to the phase.
std::string_view profile_row_solver(const ProfileType& ptype, StepPhase phase);

}  // namespace otg
