#include "otg/step1.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>

#include "otg/tolerances.hpp"
#include "profile_systems.hpp"

namespace otg {

namespace {

using detail::Candidates;
using detail::Frame;

double check_eps(double scale) { return kCheckEps * std::max(1.0, scale); }

}  // namespace

namespace {

// Episode tracker shared by the four limit checks: a bound that the profile
// start already violates — or will inevitably violate while the initial
// acceleration is wound down — is excused until it first recovers, matching
// the no-new-violation semantics of the brake pre-trajectory.
struct LimitEpisode {
    double lo, hi, eps;
    bool excused_hi, excused_lo;
    bool in_hi = false, in_lo = false;

    bool observe(double v) {
        if (v > hi + eps) {
            in_hi = true;
            if (!excused_hi) {
                return false;
            }
        } else if (in_hi) {
            excused_hi = false;
            in_hi = false;
        }
        if (v < lo - eps) {
            in_lo = true;
            if (!excused_lo) {
                return false;
            }
        } else if (in_lo) {
            excused_lo = false;
            in_lo = false;
        }
        return true;
    }
};

}  // namespace

ProfileCheck validate_profile(Profile& p, const KinematicState& x0, const KinematicState& xf,
                              const Limits& l) {
    for (double& tk : p.t) {
        if (tk < 0.0) {
            if (tk < -kNegDurationClamp) {
                return {false, "negative duration"};
            }
            tk = 0.0;
        }
        if (!std::isfinite(tk)) {
            return {false, "non-finite duration"};
        }
    }
    p.finalize(x0);

    const double ea = check_eps(std::max(std::abs(l.a_min), std::abs(l.a_max)));
    const double ev = check_eps(std::max(std::abs(l.v_min), std::abs(l.v_max)));
    const double settle =
        x0.a > 0 ? x0.v + x0.a * x0.a / (2 * l.j_max) : x0.v - x0.a * x0.a / (2 * l.j_max);

    LimitEpisode acc{l.a_min, l.a_max, ea, x0.a > l.a_max + ea, x0.a < l.a_min - ea};
    LimitEpisode vel{l.v_min, l.v_max, ev,
                     x0.v > l.v_max + ev || settle > l.v_max + ev,
                     x0.v < l.v_min - ev || settle < l.v_min - ev};

    // Walk the steps chronologically. Acceleration is piecewise linear with
    // turning points at the boundaries; velocity extrema additionally occur
    // where the acceleration crosses zero inside a ramp, so observing
    // boundaries plus those extrema covers every monotone segment.
    for (std::size_t k = 0; k < 7; ++k) {
        if (p.t[k] <= 0.0) {
            continue;
        }
        const KinematicState& in = p.states[k];
        const KinematicState& outp = p.states[k + 1];
        if (!acc.observe(in.a) || !vel.observe(in.v)) {
            return {false, k == 0 ? "initial state" : "acceleration limit"};
        }
        if (p.s[k] != 0 && in.a * outp.a <= 0.0) {
            const double jerk = p.s[k] * p.jerk;
            const double v_ext = in.v - in.a * in.a / (2 * jerk);
            if (!vel.observe(v_ext)) {
                return {false, "velocity extremum"};
            }
        } else if (p.s[k] == 0 && std::abs(in.a) <= ea) {
            if (!vel.observe(in.v)) {
                return {false, "velocity plateau"};
            }
        }
    }
    const KinematicState& end = p.states[7];
    if (!acc.observe(end.a) || !vel.observe(end.v)) {
        return {false, "velocity extremum"};
    }

    // Terminal state must match the target.
    if (std::abs(end.p - xf.p) > kPositionTol || std::abs(end.v - xf.v) > kVelocityTol ||
        std::abs(end.a - xf.a) > kAccelTol) {
        return {false, "terminal state"};
    }
    return {};
}

namespace {

void collect_direction(const KinematicState& x0, const KinematicState& xf, const Limits& l,
                       Direction dir, std::vector<Profile>& valid) {
    Frame f;
    if (dir == Direction::kUp) {
        f = Frame{x0, xf, l, l.j_max};
    } else {
        f = Frame{detail::mirror_state(x0), detail::mirror_state(xf), detail::mirror_limits(l),
                  l.j_max};
    }
    Candidates raw;
    detail::s1_all(f, raw);
    for (int i = 0; i < raw.count; ++i) {
        Profile p = raw.items[i];
        if (dir == Direction::kDown) {
            p = detail::mirror_profile(p, x0);
        }
        if (validate_profile(p, x0, xf, l)) {
            valid.push_back(p);
        }
    }
}

}  // namespace

ExtremalSet enumerate_extremal(const KinematicState& x0, const KinematicState& xf,
                               const Limits& l) {
    ExtremalSet set;
    if (x0 == xf) {
        // Already at the target: the zero profile is the only extremal one.
        set.profiles.push_back(Profile::stationary(x0, l.j_max));
        set.t_min = 0.0;
        set.ok = true;
        return set;
    }

    std::vector<Profile> valid;
    valid.reserve(16);
    collect_direction(x0, xf, l, Direction::kUp, valid);
    collect_direction(x0, xf, l, Direction::kDown, valid);
    if (valid.empty()) {
        return set;  // ok = false: algorithm failure for the caller to report
    }

    std::sort(valid.begin(), valid.end(),
              [](const Profile& a, const Profile& b) { return a.total < b.total; });

    // Merge profile types whose durations coincide (within tolerance).
    for (const Profile& p : valid) {
        if (!set.profiles.empty() && p.total - set.profiles.back().total < kDedupTol) {
            continue;
        }
        set.profiles.push_back(p);
    }
    set.t_min = set.profiles.front().total;
    set.ok = true;
    return set;
}

std::vector<Profile> solve_profile_type(const ProfileType& ptype, Direction dir, StepPhase phase,
                                        const KinematicState& x0, const KinematicState& xf,
                                        const Limits& limits, double fixed_jerk,
                                        std::optional<double> duration) {
    Frame f;
    if (dir == Direction::kUp) {
        f = Frame{x0, xf, limits, fixed_jerk};
    } else {
        f = Frame{detail::mirror_state(x0), detail::mirror_state(xf),
                  detail::mirror_limits(limits), fixed_jerk};
    }

    const bool acc0 = ptype.limits & limit_tag::kAcc0;
    const bool vel = ptype.limits & limit_tag::kVel;
    const bool acc1 = ptype.limits & limit_tag::kAcc1;

    Candidates raw;
    if (phase == StepPhase::kStep1) {
        // The UDUD rows without a velocity plateau collapse onto the fused
        // UDDU systems (their closing condition zeroes the last ramp), so a
        // single solver serves both patterns.
        if (vel) {
            if (ptype.pattern == Pattern::kUDDU) {
                detail::s1_vel(f, acc0, acc1, raw);
            }
            // UDUD with VEL is not a valid step-1 extremal type.
        } else if (acc0 && acc1) {
            detail::s1_acc0_acc1(f, raw);
        } else if (acc0) {
            detail::s1_acc0(f, raw);
        } else if (acc1) {
            detail::s1_acc1(f, raw);
        } else {
            detail::s1_none(f, raw);
        }
    } else {
        const double T = duration.value_or(0.0);
        if (vel) {
            if (ptype.pattern == Pattern::kUDDU) {
                detail::s2_vel_uddu(f, T, acc0, acc1, raw);
            } else {
                detail::s2_vel_udud(f, T, acc0, acc1, raw);
            }
        } else if (acc0 && acc1) {
            detail::s2_acc0_acc1(f, T, raw);
        } else if (acc0) {
            detail::s2_acc0(f, T, raw);
        } else if (acc1) {
            detail::s2_acc1(f, T, raw);
        } else {
            detail::s2_none(f, T, raw);
        }
    }

    std::vector<Profile> out;
    out.reserve(static_cast<std::size_t>(raw.count));
    for (int i = 0; i < raw.count; ++i) {
        Profile p = raw.items[i];
        if (dir == Direction::kDown) {
            p = detail::mirror_profile(p, x0);
        }
        out.push_back(p);
    }
    return out;
}

}  // namespace otg

namespace otg {

std::string_view profile_row_solver(const ProfileType& ptype, StepPhase phase) {
    const bool acc0 = ptype.limits & limit_tag::kAcc0;
    const bool vel = ptype.limits & limit_tag::kVel;
    const bool acc1 = ptype.limits & limit_tag::kAcc1;
    if (phase == StepPhase::kStep1) {
        if (vel) {
            if (ptype.pattern == Pattern::kUDUD) {
                return {};  // not a valid step-1 extremal type
            }
            if (acc0 && acc1) return "s1_vel_acc0_acc1";
            if (acc0) return "s1_vel_acc0";
            if (acc1) return "s1_vel_acc1";
            return "s1_vel";
        }
        // UDUD rows close with t7 = 0 and fuse onto the UDDU systems.
        if (acc0 && acc1) return "s1_acc0_acc1";
        if (acc0) return "s1_acc0";
        if (acc1) return "s1_acc1";
        return "s1_none";
    }
    if (vel) {
        const bool udud = ptype.pattern == Pattern::kUDUD;
        if (acc0 && acc1) return udud ? "s2_vel_udud_acc0_acc1" : "s2_vel_uddu_acc0_acc1";
        if (acc0) return udud ? "s2_vel_udud_acc0" : "s2_vel_uddu_acc0";
        if (acc1) return udud ? "s2_vel_udud_acc1" : "s2_vel_uddu_acc1";
        return udud ? "s2_vel_udud" : "s2_vel_uddu";
    }
    if (acc0 && acc1) return "s2_acc0_acc1";
    if (acc0) return "s2_acc0";
    if (acc1) return "s2_acc1";
    return "s2_none";
}

}  // namespace otg
