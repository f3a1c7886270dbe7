#include "otg/sync.hpp"

#include <algorithm>
#include <cmath>

#include "otg/tolerances.hpp"
#include "profile_systems.hpp"

namespace otg {

namespace {

using detail::Candidates;
using detail::Frame;

bool feasible_for_all(double T, const std::vector<DofTiming>& dofs) {
    for (const DofTiming& d : dofs) {
        const double tp = T - d.t_brake;
        if (tp < d.t_min - kSyncDurationTol) {
            return false;
        }
        for (int i = 0; i < d.intervals.count; ++i) {
            const BlockedInterval& b = d.intervals.items[i];
            if (tp > b.start + kSyncDurationTol && tp < b.end - kSyncDurationTol) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

MinDurationResult min_duration(const std::vector<DofTiming>& dofs) {
    std::vector<DurationCandidate> candidates;
    candidates.reserve(3 * dofs.size());
    for (std::size_t i = 0; i < dofs.size(); ++i) {
        const DofTiming& d = dofs[i];
        candidates.push_back({i, DurationCandidate::Kind::kMin, d.t_brake + d.t_min});
        if (d.intervals.count >= 1) {
            candidates.push_back(
                {i, DurationCandidate::Kind::kAlphaEnd, d.t_brake + d.intervals.items[0].end});
        }
        if (d.intervals.count == 2) {
            candidates.push_back(
                {i, DurationCandidate::Kind::kBetaEnd, d.t_brake + d.intervals.items[1].end});
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const DurationCandidate& a, const DurationCandidate& b) {
                  return a.value < b.value;
              });

    MinDurationResult res;
    for (const DurationCandidate& c : candidates) {
        if (feasible_for_all(c.value, dofs)) {
            res.duration = c.value;
            res.limiting_dof = c.dof;
            res.ok = true;
            return res;
        }
    }
    return res;  // should not happen: the largest candidate is always feasible
}

namespace {

void try_direction(const Frame& up_frame, double T, Direction dir, const KinematicState& x0,
                   const KinematicState& xf, const Limits& l, std::optional<Profile>& found) {
    if (found) {
        return;
    }
    // Velocity-plateau rows first (they solve analytically and succeed most
    // often), then the jerk-reduction rows.
    struct Attempt {
        enum class Row { kVelUDDU, kVelUDUD, kAcc0Acc1, kAcc0, kAcc1, kNone } row;
        bool acc0 = false;
        bool acc1 = false;
    };
    static constexpr Attempt kOrder[] = {
        {Attempt::Row::kVelUDDU, true, true},   {Attempt::Row::kVelUDDU, true, false},
        {Attempt::Row::kVelUDDU, false, true},  {Attempt::Row::kVelUDDU, false, false},
        {Attempt::Row::kVelUDUD, true, true},   {Attempt::Row::kVelUDUD, true, false},
        {Attempt::Row::kVelUDUD, false, true},  {Attempt::Row::kVelUDUD, false, false},
        {Attempt::Row::kAcc0Acc1, true, true},  {Attempt::Row::kAcc0, true, false},
        {Attempt::Row::kAcc1, false, true},     {Attempt::Row::kNone, false, false},
    };

    for (const Attempt& at : kOrder) {
        Candidates raw;
        switch (at.row) {
            case Attempt::Row::kVelUDDU:
                detail::s2_vel_uddu(up_frame, T, at.acc0, at.acc1, raw);
                break;
            case Attempt::Row::kVelUDUD:
                detail::s2_vel_udud(up_frame, T, at.acc0, at.acc1, raw);
                break;
            case Attempt::Row::kAcc0Acc1:
                detail::s2_acc0_acc1(up_frame, T, raw);
                break;
            case Attempt::Row::kAcc0:
                detail::s2_acc0(up_frame, T, raw);
                break;
            case Attempt::Row::kAcc1:
                detail::s2_acc1(up_frame, T, raw);
                break;
            case Attempt::Row::kNone:
                detail::s2_none(up_frame, T, raw);
                break;
        }
        for (int i = 0; i < raw.count; ++i) {
            Profile p = raw.items[i];
            if (dir == Direction::kDown) {
                p = detail::mirror_profile(p, x0);
            }
            if (std::abs(p.total - T) > kSyncDurationTol) {
                continue;
            }
            if (validate_profile(p, x0, xf, l)) {
                found = p;
                return;
            }
        }
    }
}

}  // namespace

std::optional<Profile> step2_synchronize(double t_profile, const KinematicState& x0,
                                         const KinematicState& xf, const Limits& l,
                                         const ExtremalSet& step1_result) {
    // Limiting DoF (or an interval boundary): reuse the already-known profile.
    if (step1_result.ok) {
        for (const Profile& p : step1_result.profiles) {
            if (std::abs(p.total - t_profile) <= kSyncDurationTol) {
                return p;
            }
        }
    }

    // Stationary DoF: hold the state for the whole duration (avoids 0/0 in
    // the polynomial reductions).
    if (x0.a == 0.0 && xf.a == 0.0 && x0.v == xf.v &&
        std::abs((xf.p - x0.p) - x0.v * t_profile) <
            kPositionTol * std::max(1.0, std::abs(x0.v) * t_profile)) {
        Profile p = Profile::stationary(x0, l.j_max);
        p.t[3] = t_profile;
        p.finalize(x0);
        if (validate_profile(p, x0, xf, l)) {
            return p;
        }
    }

    const Direction preferred =
        step1_result.ok ? step1_result.fastest().direction : Direction::kUp;

    std::optional<Profile> found;
    for (Direction dir : {preferred, preferred == Direction::kUp ? Direction::kDown
                                                                 : Direction::kUp}) {
        Frame f;
        if (dir == Direction::kUp) {
            f = Frame{x0, xf, l, l.j_max};
        } else {
            f = Frame{detail::mirror_state(x0), detail::mirror_state(xf),
                      detail::mirror_limits(l), l.j_max};
        }
        try_direction(f, t_profile, dir, x0, xf, l, found);
        if (found) {
            break;
        }
    }
    return found;
}

}  // namespace otg
