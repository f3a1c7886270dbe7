#pragma once

#include <array>

#include "otg/types.hpp"

namespace otg {

/// Up-to-two-step pre-trajectory that returns a limit-violating (or
/// inevitably violating) initial state into the admissible kinematic region.
/// First step ramps at full jerk, second step holds with zero jerk.
/// Works purely in the velocity domain; position is carried along but never
/// constrained.
struct BrakeProfile {
    std::array<double, 2> t{};
    std::array<double, 2> j{};

    double duration() const { return t[0] + t[1]; }
    bool empty() const { return t[0] <= 0.0 && t[1] <= 0.0; }

    /// State after applying the brake steps to x0.
    KinematicState integrate(const KinematicState& x0) const;
    /// State at time dt into the brake phase (dt within [0, duration]).
    KinematicState state_at(const KinematicState& x0, double dt, double* jerk_out = nullptr) const;
};

/// Decide whether (v0, a0) exceeds or will inevitably exceed the velocity or
/// acceleration limits under bounded jerk, and compute the fastest one- or
/// two-step recovery. Empty profile if the state is already safe.
BrakeProfile compute_brake(double v0, double a0, const Limits& limits);

/// Brake for the velocity-control interface: only acceleration limits are
/// enforced (velocity bounds are ignored there).
BrakeProfile compute_velocity_brake(double a0, const Limits& limits);

}  // namespace otg
