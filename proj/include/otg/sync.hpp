#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "otg/intervals.hpp"
#include "otg/step1.hpp"

namespace otg {

/// A possible synchronized duration: a DoF's minimum or the right edge of one
/// of its blocked intervals, shifted by that DoF's brake duration.
struct DurationCandidate {
    std::size_t dof = 0;
    enum class Kind { kMin, kAlphaEnd, kBetaEnd } kind = Kind::kMin;
    double value = 0.0;
};

/// Per-DoF inputs to the minimum-duration selection.
struct DofTiming {
    double t_brake = 0.0;
    double t_min = 0.0;
    BlockedIntervals intervals;
};

struct MinDurationResult {
    double duration = 0.0;    // T_f including brake offsets
    std::size_t limiting_dof = 0;
    bool ok = false;
};

/// Pick the smallest candidate duration that is feasible for every DoF:
/// T - t_brake_i >= t_min_i and outside all blocked intervals of DoF i.
MinDurationResult min_duration(const std::vector<DofTiming>& dofs);

/// Step 2: find a valid profile of total duration exactly T_p for this DoF by
/// checking the profile-type rows in a fixed order (the Step-1 optimum's
/// direction first, velocity-plateau rows before jerk-reduction rows) and
/// returning the first valid one.
std::optional<Profile> step2_synchronize(double t_profile, const KinematicState& x0,
                                         const KinematicState& xf, const Limits& limits,
                                         const ExtremalSet& step1_result);

}  // namespace otg
