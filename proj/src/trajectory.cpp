#include "otg/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "otg/tolerances.hpp"

namespace otg {

namespace {

CalcResult fail(CalcError err, std::size_t dof, std::string msg) {
    CalcResult r;
    r.error = err;
    r.error_dof = dof;
    r.message = std::move(msg);
    return r;
}

// ---- velocity-control interface helpers ------------------------------------

// Validation for velocity profiles: step signs/durations and acceleration
// bounds only; velocity limits are ignored by this interface.
bool validate_velocity_profile(Profile& p, const KinematicState& x0, const KinematicState& xf,
                               const Limits& l) {
    for (double& tk : p.t) {
        if (tk < 0.0) {
            if (tk < -kNegDurationClamp) {
                return false;
            }
            tk = 0.0;
        }
        if (!std::isfinite(tk)) {
            return false;
        }
    }
    p.finalize(x0);
    const double ea = kCheckEps * std::max({1.0, std::abs(l.a_min), std::abs(l.a_max)});
    const double a1 = p.states[1].a;
    if (a1 < l.a_min - ea || a1 > l.a_max + ea) {
        return false;
    }
    return std::abs(p.states[7].v - xf.v) <= kVelocityTol &&
           std::abs(p.states[7].a - xf.a) <= kAccelTol;
}

// Step-1 analog for the velocity interface: extremal ramp(+hold)ramp
// profiles in both directions.
ExtremalSet velocity_extremal(const KinematicState& x0, const KinematicState& xf,
                              const Limits& l) {
    ExtremalSet set;
    if (x0.v == xf.v && x0.a == xf.a) {
        Profile p = Profile::stationary(x0, l.j_max);
        set.profiles.push_back(p);
        set.t_min = 0.0;
        set.ok = true;
        return set;
    }

    const double j = l.j_max;
    std::vector<Profile> valid;
    auto push = [&](double t1, double t2, double t3, Direction dir, unsigned mask) {
        Profile p;
        p.direction = dir;
        p.pattern = Pattern::kUDDU;
        p.jerk = j;
        p.limits = mask;
        p.t = {t1, t2, t3, 0, 0, 0, 0};
        if (validate_velocity_profile(p, x0, xf, l)) {
            valid.push_back(p);
        }
    };

    const double dv = xf.v - x0.v;
    // UP: peak alpha with a0 -> alpha -> af; DOWN mirrored.
    for (int dir = 0; dir < 2; ++dir) {
        const double sgn = dir == 0 ? 1.0 : -1.0;
        const double a0 = sgn * x0.a, af = sgn * xf.a, d = sgn * dv;
        const double rad = j * d + (a0 * a0 + af * af) / 2;
        if (rad >= 0) {
            const double root = std::sqrt(rad);
            for (double alpha : {root, -root}) {
                push((alpha - a0) / j, 0.0, (alpha - af) / j,
                     dir == 0 ? Direction::kUp : Direction::kDown, 0);
            }
        }
        const double amax = dir == 0 ? l.a_max : -l.a_min;
        if (std::abs(amax) > 1e-12) {
            const double t2 = (d - (2 * amax * amax - a0 * a0 - af * af) / (2 * j)) / amax;
            push((amax - a0) / j, t2, (amax - af) / j,
                 dir == 0 ? Direction::kUp : Direction::kDown, limit_tag::kAcc0);
        }
    }
    if (valid.empty()) {
        return set;
    }
    std::sort(valid.begin(), valid.end(),
              [](const Profile& a, const Profile& b) { return a.total < b.total; });
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

BlockedIntervals velocity_blocked_intervals(ExtremalSet& set) {
    BlockedIntervals out;
    const std::size_t n = set.profiles.size();
    if (n == 1) {
        return out;
    }
    if (n == 3) {
        out.items[out.count++] = {set.profiles[1].total, set.profiles[2].total};
        return out;
    }
    out.ok = false;
    return out;
}

std::optional<Profile> velocity_synchronize(double T, const KinematicState& x0,
                                            const KinematicState& xf, const Limits& l,
                                            const ExtremalSet& step1) {
    if (step1.ok) {
        for (const Profile& p : step1.profiles) {
            if (std::abs(p.total - T) <= kSyncDurationTol) {
                return p;
            }
        }
    }
    if (x0.v == xf.v && x0.a == 0.0 && xf.a == 0.0) {
        Profile p = Profile::stationary(x0, l.j_max);
        p.t[1] = T;
        p.finalize(x0);
        return p;
    }

    const double j = l.j_max;
    const double dv = xf.v - x0.v;
    for (int dir = 0; dir < 2; ++dir) {
        const double sgn = dir == 0 ? 1.0 : -1.0;
        const double a0 = sgn * x0.a, af = sgn * xf.a, d = sgn * dv;
        const Direction direction = dir == 0 ? Direction::kUp : Direction::kDown;

        // Plateau stretch at full jerk: alpha^2 - alpha (jT + a0 + af)
        //   + (a0^2 + af^2 + 2 j dv)/2 = 0.
        {
            const double b = j * T + a0 + af;
            const double disc = b * b - 2 * (a0 * a0 + af * af) - 4 * j * d;
            if (disc >= 0) {
                for (double alpha : {(b + std::sqrt(disc)) / 2, (b - std::sqrt(disc)) / 2}) {
                    const double t1 = (alpha - a0) / j;
                    const double t3 = (alpha - af) / j;
                    const double t2 = T - t1 - t3;
                    Profile p;
                    p.direction = direction;
                    p.pattern = Pattern::kUDDU;
                    p.jerk = j;
                    p.limits = 0;
                    p.t = {t1, t2, t3, 0, 0, 0, 0};
                    if (std::abs(t1 + t2 + t3 - T) <= kSyncDurationTol &&
                        validate_velocity_profile(p, x0, xf, l)) {
                        return p;
                    }
                }
            }
        }
        // Jerk reduction, no hold: T^2 g^2 + 2 g (T(a0+af) - 2 dv)
        //   + (a0+af)^2 - 2(a0^2+af^2) = 0.
        {
            const double qa = T * T;
            const double qb = 2 * (T * (a0 + af) - 2 * d);
            const double qc = (a0 + af) * (a0 + af) - 2 * (a0 * a0 + af * af);
            const double disc = qb * qb - 4 * qa * qc;
            if (disc >= 0 && qa > 0) {
                for (double g : {(-qb + std::sqrt(disc)) / (2 * qa),
                                 (-qb - std::sqrt(disc)) / (2 * qa)}) {
                    if (!(g > 0) || g > j * (1 + 1e-9)) {
                        continue;
                    }
                    const double gg = std::min(g, j);
                    const double alpha = (gg * T + a0 + af) / 2;
                    Profile p;
                    p.direction = direction;
                    p.pattern = Pattern::kUDDU;
                    p.jerk = gg;
                    p.limits = 0;
                    p.t = {(alpha - a0) / gg, 0, (alpha - af) / gg, 0, 0, 0, 0};
                    if (std::abs(p.t[0] + p.t[2] - T) <= kSyncDurationTol &&
                        validate_velocity_profile(p, x0, xf, l)) {
                        return p;
                    }
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace

// ---- Trajectory -------------------------------------------------------------

void Trajectory::at_time(double t, std::span<KinematicState> states,
                         std::span<double> jerks) const {
    for (std::size_t i = 0; i < dofs.size(); ++i) {
        const DofTrajectory& d = dofs[i];
        double jerk = 0.0;
        KinematicState s;
        const double tb = d.brake.duration();
        if (t < tb) {
            s = d.brake.state_at(d.start, t, &jerk);
        } else {
            s = d.profile.state_at(t - tb, &jerk);
        }
        states[i] = s;
        if (!jerks.empty()) {
            jerks[i] = jerk;
        }
    }
}

std::vector<KinematicState> Trajectory::at_time(double t) const {
    std::vector<KinematicState> out(dofs.size());
    at_time(t, out, {});
    return out;
}

// ---- calculate ---------------------------------------------------------------

CalcResult calculate(const InputParameters& input) {
    if (ValidationResult v = validate_input(input); !v.ok) {
        return fail(CalcError::kInvalidInput, v.dof, v.message);
    }
    const std::size_t n = input.dof_count;

    Trajectory traj;
    traj.dofs.resize(n);
    std::vector<ExtremalSet> sets(n);
    std::vector<DofTiming> timings(n);
    std::vector<KinematicState> starts(n);

    for (std::size_t i = 0; i < n; ++i) {
        DofTrajectory& d = traj.dofs[i];
        d.start = input.current[i];
        d.brake = compute_brake(input.current[i].v, input.current[i].a, input.limits[i]);
        starts[i] = d.brake.empty() ? input.current[i] : d.brake.integrate(input.current[i]);

        sets[i] = enumerate_extremal(starts[i], input.target[i], input.limits[i]);
        if (!sets[i].ok) {
            return fail(CalcError::kStep1Failed, i, "no valid extremal profile (dof " +
                                                        std::to_string(i) + ", step 1)");
        }
        d.t_min = sets[i].t_min;
        d.intervals = derive_blocked_intervals(sets[i]);
        if (!d.intervals.ok) {
            return fail(CalcError::kIntervalsFailed, i,
                        "unexpected extremal-set cardinality (dof " + std::to_string(i) + ")");
        }
        timings[i] = DofTiming{d.brake.duration(), sets[i].t_min, d.intervals};
    }

    const MinDurationResult md = min_duration(timings);
    if (!md.ok) {
        return fail(CalcError::kSyncFailed, 0, "no feasible synchronized duration");
    }
    traj.duration = md.duration;
    traj.limiting_dof = md.limiting_dof;

    for (std::size_t i = 0; i < n; ++i) {
        DofTrajectory& d = traj.dofs[i];
        const double tp = traj.duration - d.brake.duration();
        std::optional<Profile> p =
            step2_synchronize(tp, starts[i], input.target[i], input.limits[i], sets[i]);
        if (!p) {
            return fail(CalcError::kSyncFailed, i,
                        "time synchronization failed (dof " + std::to_string(i) + ", T=" +
                            std::to_string(tp) + ")");
        }
        d.profile = *p;
    }

    CalcResult r;
    r.trajectory = std::move(traj);
    return r;
}

CalcResult calculate_velocity_trajectory(const InputParameters& input) {
    const std::size_t n = input.dof_count;
    if (n == 0 || input.current.size() != n || input.target.size() != n ||
        input.limits.size() != n) {
        return fail(CalcError::kInvalidInput, static_cast<std::size_t>(-1),
                    "state/limit lists do not match dof count");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Limits& l = input.limits[i];
        if (!(l.j_max > 0) || !(l.a_min < l.a_max) || !std::isfinite(input.target[i].v) ||
            !std::isfinite(input.target[i].a) || !std::isfinite(input.current[i].v) ||
            !std::isfinite(input.current[i].a)) {
            return fail(CalcError::kInvalidInput, i, "invalid velocity-interface input");
        }
        if (input.target[i].a < l.a_min || input.target[i].a > l.a_max) {
            return fail(CalcError::kInvalidInput, i, "target acceleration outside limits");
        }
    }

    Trajectory traj;
    traj.dofs.resize(n);
    std::vector<ExtremalSet> sets(n);
    std::vector<DofTiming> timings(n);
    std::vector<KinematicState> starts(n);

    for (std::size_t i = 0; i < n; ++i) {
        DofTrajectory& d = traj.dofs[i];
        d.start = input.current[i];
        d.brake = compute_velocity_brake(input.current[i].a, input.limits[i]);
        starts[i] = d.brake.empty() ? input.current[i] : d.brake.integrate(input.current[i]);

        sets[i] = velocity_extremal(starts[i], input.target[i], input.limits[i]);
        if (!sets[i].ok) {
            return fail(CalcError::kStep1Failed, i,
                        "no valid velocity profile (dof " + std::to_string(i) + ")");
        }
        d.t_min = sets[i].t_min;
        d.intervals = velocity_blocked_intervals(sets[i]);
        if (!d.intervals.ok) {
            return fail(CalcError::kIntervalsFailed, i,
                        "unexpected velocity extremal-set cardinality (dof " +
                            std::to_string(i) + ")");
        }
        timings[i] = DofTiming{d.brake.duration(), sets[i].t_min, d.intervals};
    }

    const MinDurationResult md = min_duration(timings);
    if (!md.ok) {
        return fail(CalcError::kSyncFailed, 0, "no feasible synchronized duration");
    }
    traj.duration = md.duration;
    traj.limiting_dof = md.limiting_dof;

    for (std::size_t i = 0; i < n; ++i) {
        DofTrajectory& d = traj.dofs[i];
        const double tp = traj.duration - d.brake.duration();
        std::optional<Profile> p =
            velocity_synchronize(tp, starts[i], input.target[i], input.limits[i], sets[i]);
        if (!p) {
            return fail(CalcError::kSyncFailed, i,
                        "velocity synchronization failed (dof " + std::to_string(i) + ")");
        }
        d.profile = *p;
    }

    CalcResult r;
    r.trajectory = std::move(traj);
    return r;
}

// ---- Generator ----------------------------------------------------------------

Generator::Generator(std::size_t dof_count)
    : state_buf_(dof_count), jerk_buf_(dof_count) {}

void Generator::reset() {
    has_trajectory_ = false;
    elapsed_ = 0.0;
}

UpdateResult Generator::update(const InputParameters& input, double cycle) {
    UpdateResult res;
    if (!has_trajectory_ || !(input == last_input_)) {
        CalcResult calc = calculate(input);
        res.recomputed = true;
        if (!calc.ok()) {
            res.error = calc.error;
            if (!has_trajectory_) {
                return res;
            }
            // Keep the previous trajectory installed.
        } else {
            trajectory_ = std::move(calc.trajectory);
            last_input_ = input;
            has_trajectory_ = true;
            elapsed_ = 0.0;
        }
    }
    elapsed_ += cycle;
    if (state_buf_.size() != trajectory_.dofs.size()) {
        state_buf_.resize(trajectory_.dofs.size());
        jerk_buf_.resize(trajectory_.dofs.size());
    }
    trajectory_.at_time(elapsed_, state_buf_, jerk_buf_);
    res.finished = elapsed_ >= trajectory_.duration;
    res.states = state_buf_;
    res.jerks = jerk_buf_;
    return res;
}

}  // namespace otg
