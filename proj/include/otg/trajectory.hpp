#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "otg/brake.hpp"
#include "otg/intervals.hpp"
#include "otg/step1.hpp"
#include "otg/sync.hpp"
#include "otg/types.hpp"

namespace otg {

enum class CalcError {
    kNone = 0,
    kInvalidInput,
    kStep1Failed,
    kIntervalsFailed,
    kSyncFailed,
};

/// One degree of freedom of a computed trajectory: optional brake prefix plus
/// the synchronized seven-step profile. brake.duration() + profile.duration()
/// equals the trajectory duration for every DoF.
struct DofTrajectory {
    BrakeProfile brake;
    Profile profile;
    KinematicState start;  // state at t = 0, before the brake prefix
    double t_min = 0.0;    // independent per-DoF minimum (diagnostics)
    BlockedIntervals intervals;
};

struct Trajectory {
    std::vector<DofTrajectory> dofs;
    double duration = 0.0;
    std::size_t limiting_dof = 0;

    /// State and commanded jerk of every DoF at time t. For t > duration the
    /// target state is held with zero jerk. Writes through spans; performs no
    /// allocation.
    void at_time(double t, std::span<KinematicState> states, std::span<double> jerks) const;
    std::vector<KinematicState> at_time(double t) const;
};

struct CalcResult {
    Trajectory trajectory;
    CalcError error = CalcError::kNone;
    std::size_t error_dof = 0;
    std::string message;

    bool ok() const { return error == CalcError::kNone; }
    explicit operator bool() const { return ok(); }
};

/// Full pipeline: per-DoF brake pre-trajectory, Step-1 extremal enumeration,
/// blocked intervals, global minimum duration, Step-2 synchronization.
/// Deterministic: identical inputs produce bit-identical trajectories.
CalcResult calculate(const InputParameters& input);

/// Velocity-control interface: time-optimal transitions to (v_f, a_f) per DoF
/// ignoring positions and velocity limits, synchronized across DoFs.
CalcResult calculate_velocity_trajectory(const InputParameters& input);

struct UpdateResult {
    bool recomputed = false;
    bool finished = false;
    CalcError error = CalcError::kNone;
    std::span<const KinematicState> states;
    std::span<const double> jerks;
};

/// Control-cycle driver owning the current trajectory. update() recomputes
/// only when the input changes (exact comparison) and otherwise just samples,
/// allocation-free.
class Generator {
  public:
    explicit Generator(std::size_t dof_count);

    /// Advance by one control period and sample. On a failed recompute the
    /// previous trajectory stays installed and the error is reported.
    UpdateResult update(const InputParameters& input, double cycle);

    const Trajectory& trajectory() const { return trajectory_; }
    double elapsed() const { return elapsed_; }
    void reset();

  private:
    InputParameters last_input_;
    Trajectory trajectory_;
    double elapsed_ = 0.0;
    bool has_trajectory_ = false;
    std::vector<KinematicState> state_buf_;
    std::vector<double> jerk_buf_;
};

}  // namespace otg
