#pragma once

namespace otg {

// Terminal-state tolerances used by profile validation and the verification
// oracle. A trajectory is accepted when the final sampled state deviates from
// the target by less than these bounds.
inline constexpr double kPositionTol = 1e-8;
inline constexpr double kVelocityTol = 1e-8;
inline constexpr double kAccelTol = 1e-12;

// Margin allowed when checking velocity/acceleration limits on a sampled
// trajectory (negative margin = tolerated overshoot).
inline constexpr double kLimitMargin = 1e-9;

// Epsilon for inequality checks inside profile validation (scaled by the
// magnitude of the quantity under test).
inline constexpr double kCheckEps = 1e-12;

// Profiles whose total duration differs by less than this are considered the
// same extremal profile (merged profile types).
inline constexpr double kDedupTol = 1e-9;

// Root solvers may return slightly negative step durations for degenerate
// profiles; values in [-kNegDurationClamp, 0) are clamped to zero.
inline constexpr double kNegDurationClamp = 1e-12;

// Strictness epsilon for detecting limit violations of the initial state.
inline constexpr double kBrakeEps = 1e-12;

// Step-2 solutions must realize the requested duration to this accuracy.
inline constexpr double kSyncDurationTol = 1e-9;

// Beyond this duration the double-precision error model (dp ~ T^2 * da)
// no longer guarantees the terminal position tolerance.
inline constexpr double kDurationCutoff = 7.1e3;

}  // namespace otg
