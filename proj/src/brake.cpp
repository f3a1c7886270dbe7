#include "otg/brake.hpp"

#include <cmath>
#include <limits>

#include "otg/tolerances.hpp"

namespace otg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

KinematicState advance(const KinematicState& x, double jerk, double dt) {
    return integrate_step(x, jerk, dt);
}

Limits mirrored(const Limits& l) {
    Limits m;
    m.v_min = -l.v_max;
    m.v_max = -l.v_min;
    m.a_min = -l.a_max;
    m.a_max = -l.a_min;
    m.j_max = l.j_max;
    return m;
}

BrakeProfile mirror(BrakeProfile b) {
    b.j[0] = -b.j[0];
    b.j[1] = -b.j[1];
    return b;
}

// Shed velocity downwards (towards v_max) with a full-jerk down ramp plus an
// optional zero-jerk hold. The ramp runs until the state is safe — both the
// acceleration back inside its limits and v down to v_max — but never beyond
// a_min and never past the v_min recovery margin (the point from which
// returning the acceleration to zero would already undershoot v_min).
BrakeProfile velocity_brake_down(double v0, double a0, const Limits& l) {
    const double j = l.j_max;
    BrakeProfile b;
    b.j[0] = -j;

    const double v_at_a_zero = v0 + a0 * std::abs(a0) / (2 * j) * (a0 > 0 ? 1.0 : -1.0);
    const bool need_vmax_fix = v0 > l.v_max + kBrakeEps || v_at_a_zero > l.v_max + kBrakeEps;
    const bool need_acc_fix = a0 > l.a_max + kBrakeEps;

    const double rad_vmax = a0 * a0 + 2 * j * (v0 - l.v_max);
    const double t_cross_vmax = rad_vmax >= 0 ? (a0 + std::sqrt(rad_vmax)) / j : kInf;
    const double t_safe = std::max(need_acc_fix ? (a0 - l.a_max) / j : 0.0,
                                   need_vmax_fix ? t_cross_vmax : 0.0);

    const double t_to_a_min = (a0 - l.a_min) / j;
    const double rad_margin = a0 * a0 / 2 + j * (v0 - l.v_min);
    const double t_margin_vmin = rad_margin >= 0 ? (a0 + std::sqrt(rad_margin)) / j : kInf;
    const double t_hard = std::min(t_to_a_min, t_margin_vmin);

    const double t0 = std::min(t_safe, t_hard);
    if (!(t0 > 0) || !std::isfinite(t0)) {
        return b;
    }
    b.t[0] = t0;

    const KinematicState s1 = advance({0.0, v0, a0}, -j, t0);
    if (s1.v > l.v_max + kBrakeEps && s1.a < -kBrakeEps) {
        // Hold the braking acceleration until v reaches v_max, but never past
        // the v_min recovery margin.
        const double t_to_vmax = (l.v_max - s1.v) / s1.a;
        const double margin = s1.v - s1.a * s1.a / (2 * j);
        const double t_margin = (l.v_min - margin) / s1.a;
        b.j[1] = 0.0;
        b.t[1] = std::max(0.0, std::min(t_to_vmax, t_margin));
    }
    return b;
}

// a0 > a_max with the velocity still recoverable: ramp back to a_max; if the
// velocity was pushed below v_min on the way, hold a_max to climb back into
// the window, but stop early if the climb would make v_max unrecoverable.
BrakeProfile acceleration_brake_down(double v0, double a0, const Limits& l) {
    const double j = l.j_max;
    const double t_to_a_max = (a0 - l.a_max) / j;
    const double t_to_a_zero = a0 / j;
    const double v_at_a_max = v0 + a0 * t_to_a_max - 0.5 * j * t_to_a_max * t_to_a_max;
    const double v_at_a_zero = v0 + a0 * t_to_a_zero - 0.5 * j * t_to_a_zero * t_to_a_zero;

    if (v_at_a_zero > l.v_max + kBrakeEps) {
        // Even full recovery overshoots v_max: brake in the velocity domain
        // (this also carries any unavoidable excursion through the window).
        return velocity_brake_down(v0, a0, l);
    }
    BrakeProfile b;
    b.j[0] = -j;
    b.t[0] = t_to_a_max;
    if (v_at_a_max < l.v_min - kBrakeEps && l.a_max > kBrakeEps) {
        const double t_to_vmin = (l.v_min - v_at_a_max) / l.a_max;
        const double t_to_vmax = (l.v_max - v_at_a_max) / l.a_max;
        // Climbing raises the settle velocity v + a_max^2/(2j); cap the hold
        // where it reaches v_max.
        const double t_settle = (l.v_max - v_at_a_zero) / l.a_max;
        double hold = kInf;
        for (double t : {t_to_vmin, t_to_vmax, t_settle}) {
            if (t > 0) {
                hold = std::min(hold, t);
            }
        }
        if (std::isfinite(hold)) {
            b.j[1] = 0.0;
            b.t[1] = hold;
        }
    }
    return b;
}

}  // namespace

KinematicState BrakeProfile::integrate(const KinematicState& x0) const {
    return advance(advance(x0, j[0], t[0]), j[1], t[1]);
}

KinematicState BrakeProfile::state_at(const KinematicState& x0, double dt, double* jerk_out) const {
    if (dt < t[0]) {
        if (jerk_out) {
            *jerk_out = j[0];
        }
        return advance(x0, j[0], dt);
    }
    const KinematicState mid = advance(x0, j[0], t[0]);
    const double rest = dt - t[0];
    if (rest < t[1]) {
        if (jerk_out) {
            *jerk_out = j[1];
        }
        return advance(mid, j[1], rest);
    }
    if (jerk_out) {
        *jerk_out = 0.0;
    }
    return advance(mid, j[1], t[1]);
}

BrakeProfile compute_brake(double v0, double a0, const Limits& l) {
    const double j = l.j_max;
    if (a0 > l.a_max + kBrakeEps) {
        return acceleration_brake_down(v0, a0, l);
    }
    if (a0 < l.a_min - kBrakeEps) {
        return mirror(acceleration_brake_down(-v0, -a0, mirrored(l)));
    }

    // Acceleration within limits: check current and inevitable velocity
    // violations. Inevitability: the velocity reached when ramping the
    // acceleration to zero at full jerk already leaves the window.
    const bool inevitable_up = a0 > kBrakeEps && v0 + a0 * a0 / (2 * j) > l.v_max + kBrakeEps;
    const bool inevitable_down = a0 < -kBrakeEps && v0 - a0 * a0 / (2 * j) < l.v_min - kBrakeEps;
    const bool down_pressure = v0 > l.v_max + kBrakeEps || inevitable_up;
    const bool up_pressure = v0 < l.v_min - kBrakeEps || inevitable_down;

    if (down_pressure && up_pressure) {
        // Conflicting pressures: the inevitability (driven by the current
        // acceleration) decides which side must be softened first.
        if (inevitable_down) {
            return mirror(velocity_brake_down(-v0, -a0, mirrored(l)));
        }
        return velocity_brake_down(v0, a0, l);
    }
    if (down_pressure) {
        return velocity_brake_down(v0, a0, l);
    }
    if (up_pressure) {
        return mirror(velocity_brake_down(-v0, -a0, mirrored(l)));
    }
    return {};
}

BrakeProfile compute_velocity_brake(double a0, const Limits& l) {
    BrakeProfile b;
    if (a0 > l.a_max + kBrakeEps) {
        b.j[0] = -l.j_max;
        b.t[0] = (a0 - l.a_max) / l.j_max;
    } else if (a0 < l.a_min - kBrakeEps) {
        b.j[0] = l.j_max;
        b.t[0] = (l.a_min - a0) / l.j_max;
    }
    return b;
}

}  // namespace otg
