#include "otg/types.hpp"

#include <cmath>

namespace otg {

namespace {

bool all_finite(const KinematicState& x) {
    return std::isfinite(x.p) && std::isfinite(x.v) && std::isfinite(x.a);
}

bool all_finite(const Limits& l) {
    return std::isfinite(l.v_min) && std::isfinite(l.v_max) && std::isfinite(l.a_min) &&
           std::isfinite(l.a_max) && std::isfinite(l.j_max);
}

ValidationResult reject(ValidationError error, std::size_t dof, std::string message) {
    ValidationResult r;
    r.ok = false;
    r.error = error;
    r.dof = dof;
    r.message = std::move(message);
    return r;
}

}  // namespace

ValidationResult validate_dof(const KinematicState& current, const KinematicState& target,
                              const Limits& limits, std::size_t dof) {
    const std::string at = " (dof " + std::to_string(dof) + ")";
    if (!all_finite(current) || !all_finite(target) || !all_finite(limits)) {
        return reject(ValidationError::kNonFinite, dof, "non-finite value" + at);
    }
    if (!(limits.v_min < limits.v_max)) {
        return reject(ValidationError::kDegenerateVelocityRange, dof,
                      "degenerate velocity range" + at);
    }
    if (!(limits.a_min < limits.a_max)) {
        return reject(ValidationError::kDegenerateAccelerationRange, dof,
                      "degenerate acceleration range" + at);
    }
    if (!(limits.j_max > 0)) {
        return reject(ValidationError::kNonPositiveJerk, dof, "non-positive jerk limit" + at);
    }
    if (target.v < limits.v_min || target.v > limits.v_max) {
        return reject(ValidationError::kTargetVelocityOutOfRange, dof,
                      "target velocity outside limits" + at);
    }
    if (target.a < limits.a_min || target.a > limits.a_max) {
        return reject(ValidationError::kTargetAccelerationOutOfRange, dof,
                      "target acceleration outside limits" + at);
    }
    if (std::abs(target.a) > max_target_acceleration(target.v, limits)) {
        return reject(ValidationError::kTargetAccelerationUnreachable, dof,
                      "target acceleration unreachable" + at);
    }
    // Directional refinement of the reachability bound: arriving with a_f < 0
    // means the velocity passes above v_f by a_f^2/(2 j_max) beforehand (the
    // last zero crossing of the acceleration is a velocity maximum), so the
    // room on that side must cover the swing; mirrored for a_f > 0.
    const double room = target.a >= 0 ? target.v - limits.v_min : limits.v_max - target.v;
    if (target.a != 0.0 && std::abs(target.a) > std::sqrt(2 * limits.j_max * room)) {
        return reject(ValidationError::kTargetAccelerationUnreachable, dof,
                      "target acceleration unreachable" + at);
    }
    return {};
}

ValidationResult validate_input(const InputParameters& input) {
    if (input.dof_count == 0 || input.current.size() != input.dof_count ||
        input.target.size() != input.dof_count || input.limits.size() != input.dof_count) {
        return reject(ValidationError::kSizeMismatch, static_cast<std::size_t>(-1),
                      "state/limit lists do not match dof count");
    }
    for (std::size_t i = 0; i < input.dof_count; ++i) {
        if (ValidationResult r = validate_dof(input.current[i], input.target[i], input.limits[i], i);
            !r.ok) {
            return r;
        }
    }
    return {};
}

}  // namespace otg
