#include "otg/profile.hpp"

namespace otg {

namespace limit_tag {
std::string to_string(unsigned mask) {
    if (mask == 0) {
        return "NONE";
    }
    std::string out;
    if (mask & kAcc0) {
        out += "ACC0";
    }
    if (mask & kVel) {
        if (!out.empty()) {
            out += '+';
        }
        out += "VEL";
    }
    if (mask & kAcc1) {
        if (!out.empty()) {
            out += '+';
        }
        out += "ACC1";
    }
    return out;
}
}  // namespace limit_tag

std::array<int, 7> jerk_signs(Direction dir, Pattern pat) {
    std::array<int, 7> s = pat == Pattern::kUDDU ? std::array<int, 7>{1, 0, -1, 0, -1, 0, 1}
                                                 : std::array<int, 7>{1, 0, -1, 0, 1, 0, -1};
    if (dir == Direction::kDown) {
        for (int& v : s) {
            v = -v;
        }
    }
    return s;
}

void Profile::finalize(const KinematicState& x0) {
    s = jerk_signs(direction, pattern);
    states[0] = x0;
    total = 0.0;
    for (std::size_t k = 0; k < 7; ++k) {
        states[k + 1] = integrate_step(states[k], s[k] * jerk, t[k]);
        total += t[k];
    }
}

KinematicState Profile::state_at(double dt, double* jerk_out) const {
    // Right-continuous at step boundaries: the jerk reported is the one of
    // the step being entered; zero-length steps are skipped.
    double remaining = dt > 0.0 ? dt : 0.0;
    for (std::size_t k = 0; k < 7; ++k) {
        if (remaining < t[k]) {
            if (jerk_out) {
                *jerk_out = s[k] * jerk;
            }
            return integrate_step(states[k], s[k] * jerk, remaining);
        }
        remaining -= t[k];
    }
    if (jerk_out) {
        *jerk_out = 0.0;
    }
    return states[7];
}

Profile Profile::stationary(const KinematicState& x0, double jerk_magnitude) {
    Profile p;
    p.jerk = jerk_magnitude;
    p.finalize(x0);
    return p;
}

}  // namespace otg
