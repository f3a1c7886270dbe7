#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace otg {

/// Complete kinematic state of one degree of freedom at one instant.
struct KinematicState {
    double p = 0.0;  // position
    double v = 0.0;  // velocity
    double a = 0.0;  // acceleration

    friend bool operator==(const KinematicState&, const KinematicState&) = default;
};

/// Directional velocity and acceleration bounds plus a symmetric jerk bound.
/// v_min < v_max and a_min < a_max are required; neither interval has to
/// contain zero. j_max > 0, with j_min = -j_max implied.
struct Limits {
    double v_min = 0.0;
    double v_max = 0.0;
    double a_min = 0.0;
    double a_max = 0.0;
    double j_max = 0.0;

    friend bool operator==(const Limits&, const Limits&) = default;
};

/// Per-call problem description for N degrees of freedom.
struct InputParameters {
    std::size_t dof_count = 0;
    std::vector<KinematicState> current;
    std::vector<KinematicState> target;
    std::vector<Limits> limits;

    friend bool operator==(const InputParameters&, const InputParameters&) = default;
};

enum class ValidationError {
    kNone = 0,
    kNonFinite,
    kDegenerateVelocityRange,
    kDegenerateAccelerationRange,
    kNonPositiveJerk,
    kTargetVelocityOutOfRange,
    kTargetAccelerationOutOfRange,
    kTargetAccelerationUnreachable,
    kSizeMismatch,
};

/// Structured outcome of validate_input. `dof` identifies the offending
/// degree of freedom (or SIZE_MAX when the problem is malformed as a whole).
struct ValidationResult {
    bool ok = true;
    ValidationError error = ValidationError::kNone;
    std::size_t dof = static_cast<std::size_t>(-1);
    std::string message;

    explicit operator bool() const { return ok; }
};

/// Advance a state by dt under constant jerk:
///   a' = a + j dt,  v' = v + a dt + j/2 dt^2,  p' = p + v dt + a/2 dt^2 + j/6 dt^3.
inline KinematicState integrate_step(const KinematicState& x, double jerk, double dt) {
    KinematicState r;
    r.a = x.a + jerk * dt;
    r.v = x.v + (x.a + jerk * dt / 2) * dt;
    r.p = x.p + (x.v + (x.a / 2 + jerk * dt / 6) * dt) * dt;
    return r;
}

/// Largest admissible target-acceleration magnitude for a given target
/// velocity: an acceleration at the target needs a velocity interval to be
/// wound down within, so |a_f| <= sqrt(2 j_max max(|v_max - v_f|, |v_min - v_f|)).
inline double max_target_acceleration(double v_f, const Limits& l) {
    const double span = std::max(std::abs(l.v_max - v_f), std::abs(l.v_min - v_f));
    return std::sqrt(2 * l.j_max * span);
}

/// Check all InputParameters invariants. Boundary equality (target exactly at
/// a limit, |a_f| exactly at the reachability bound) is accepted.
ValidationResult validate_input(const InputParameters& input);

/// Same checks for a single degree of freedom.
ValidationResult validate_dof(const KinematicState& current, const KinematicState& target,
                              const Limits& limits, std::size_t dof);

}  // namespace otg
