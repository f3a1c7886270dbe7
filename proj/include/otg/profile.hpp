#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "otg/types.hpp"

namespace otg {

enum class Direction : std::uint8_t { kUp, kDown };

enum class Pattern : std::uint8_t { kUDDU, kUDUD };

/// Which limits a profile saturates. Stored as a bitmask.
namespace limit_tag {
inline constexpr unsigned kAcc0 = 1u << 0;
inline constexpr unsigned kVel = 1u << 1;
inline constexpr unsigned kAcc1 = 1u << 2;
std::string to_string(unsigned mask);
}  // namespace limit_tag

/// Seven-step constant-jerk schedule. Steps 1,3,5,7 carry jerk +-j_f per the
/// sign pattern; steps 2,4,6 are zero-jerk holds (ACC0, VEL, ACC1).
/// Boundary states chain by integrate_step; states[0] is the profile start,
/// states[7] the achieved final state.
struct Profile {
    std::array<double, 7> t{};
    std::array<int, 7> s{};
    double jerk = 0.0;  // magnitude of the non-zero jerk steps, > 0 unless all-zero profile
    std::array<KinematicState, 8> states{};
    Direction direction = Direction::kUp;
    Pattern pattern = Pattern::kUDDU;
    unsigned limits = 0;
    double total = 0.0;

    double duration() const { return total; }
    const KinematicState& final_state() const { return states[7]; }

    /// Fill jerk signs for the direction/pattern and integrate the boundary
    /// states from x0. Also recomputes the total duration.
    void finalize(const KinematicState& x0);

    /// Signed jerk of step k (0-based).
    double step_jerk(int k) const { return s[static_cast<std::size_t>(k)] * jerk; }

    /// State at time dt into the profile (dt clamped to [0, total]).
    KinematicState state_at(double dt, double* jerk_out = nullptr) const;

    /// Canonical all-zero profile holding x0 forever (used for stationary DoFs).
    static Profile stationary(const KinematicState& x0, double jerk_magnitude);
};

/// Jerk sign pattern for a direction. UDDU: (+,0,-,0,-,0,+); UDUD: (+,0,-,0,+,0,-);
/// DOWN negates every sign.
std::array<int, 7> jerk_signs(Direction dir, Pattern pat);

}  // namespace otg
