#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "otg/brake.hpp"
#include "otg/intervals.hpp"
#include "otg/step1.hpp"
#include "otg/testkit.hpp"
#include "otg/tolerances.hpp"

using namespace otg;

namespace {

// Forward-integration oracle: sample the profile densely and check limits and
// the terminal state independently of the stored boundary states.
void check_profile_integrates(const Profile& p, const KinematicState& x0,
                              const KinematicState& xf, const Limits& l,
                              bool check_limits = true) {
    KinematicState s = x0;
    for (std::size_t k = 0; k < 7; ++k) {
        const double jerk = p.s[k] * p.jerk;
        const int steps = 200;
        if (check_limits) {
            for (int q = 1; q <= steps; ++q) {
                const KinematicState y = integrate_step(s, jerk, p.t[k] * q / steps);
                CHECK(y.v <= l.v_max + 1e-6);
                CHECK(y.v >= l.v_min - 1e-6);
                CHECK(y.a <= l.a_max + 1e-6);
                CHECK(y.a >= l.a_min - 1e-6);
            }
        }
        s = integrate_step(s, jerk, p.t[k]);
    }
    CHECK(std::abs(s.p - xf.p) < 1e-8);
    CHECK(std::abs(s.v - xf.v) < 1e-8);
    CHECK(std::abs(s.a - xf.a) < 1e-12);
}

ExtremalSet run(const KinematicState& x0, const KinematicState& xf, const Limits& l) {
    ExtremalSet set = enumerate_extremal(x0, xf, l);
    REQUIRE(set.ok);
    for (const Profile& p : set.profiles) {
        check_profile_integrates(p, x0, xf, l);
    }
    return set;
}

}  // namespace

TEST_CASE("rest-to-rest symmetric S-curve") {
    const KinematicState x0{0, 0, 0};
    const KinematicState xf{0.25, 0, 0};
    const Limits l{-1, 1, -1, 1, 1};
    const ExtremalSet set = run(x0, xf, l);
    CHECK(set.t_min == doctest::Approx(2.0).epsilon(1e-9));
    const Profile& p = set.fastest();
    // Canonical schedule: 0.5s ramps with the fused middle ramp of 1.0s and
    // no holds (peak acceleration 0.5, peak velocity 0.25, well within
    // limits).
    CHECK(p.t[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(p.t[1] == doctest::Approx(0.0));
    CHECK(p.t[2] + p.t[4] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p.t[3] == doctest::Approx(0.0));
    CHECK(p.t[5] == doctest::Approx(0.0));
    CHECK(p.t[6] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(p.states[1].a == doctest::Approx(0.5));
    CHECK(p.direction == Direction::kUp);
}

TEST_CASE("already at target") {
    const KinematicState x{1.5, 0, 0};
    const Limits l{-1, 1, -1, 1, 1};
    const ExtremalSet set = enumerate_extremal(x, x, l);
    REQUIRE(set.ok);
    CHECK(set.t_min == doctest::Approx(0.0));
}

TEST_CASE("all seven steps active hits ACC0, VEL, ACC1 in order") {
    // Long reach with tight limits, non-zero initial velocity and target
    // acceleration: the optimum saturates all three limits.
    const KinematicState x0{0, 0.3, 0};
    const KinematicState xf{10.0, 0.2, -0.4};
    const Limits l{-1, 1, -0.6, 0.6, 2};
    const ExtremalSet set = run(x0, xf, l);
    const Profile& p = set.fastest();
    CHECK((p.limits & limit_tag::kAcc0) != 0);
    CHECK((p.limits & limit_tag::kVel) != 0);
    CHECK((p.limits & limit_tag::kAcc1) != 0);
    for (int k : {0, 1, 2, 3, 4, 5, 6}) {
        CHECK(p.t[static_cast<std::size_t>(k)] > 0.0);
    }
    // The saturated values appear in order: a_max, v_max, a_min.
    CHECK(p.states[1].a == doctest::Approx(l.a_max));
    CHECK(p.states[3].v == doctest::Approx(l.v_max));
    CHECK(p.states[5].a == doctest::Approx(l.a_min));
}

TEST_CASE("validate_profile rejections") {
    const KinematicState x0{0, 0, 0};
    const KinematicState xf{0.25, 0, 0};
    const Limits l{-1, 1, -1, 1, 1};
    ExtremalSet set = enumerate_extremal(x0, xf, l);
    REQUIRE(set.ok);
    Profile good = set.fastest();
    CHECK(validate_profile(good, x0, xf, l).ok);

    Profile negative = good;
    negative.t[2] = -1e-3;
    const ProfileCheck c1 = validate_profile(negative, x0, xf, l);
    CHECK_FALSE(c1.ok);
    CHECK(std::string(c1.reason) == "negative duration");

    // Inflate the initial velocity: the mid-profile velocity peak then
    // exceeds v_max while the terminal state no longer matches either; the
    // extremum check fires first on a profile that still ends at its own
    // target, so rebuild the scenario around a shifted target.
    Profile peaked = good;
    const KinematicState x0_fast{0, 0.9, 0};
    peaked.finalize(x0_fast);
    const KinematicState xf_shift = peaked.states[7];
    Limits tight = l;
    tight.v_max = peaked.states[3].v - 0.1;  // the true peak now exceeds v_max
    const ProfileCheck c2 = validate_profile(peaked, x0_fast, xf_shift, tight);
    CHECK_FALSE(c2.ok);
    CHECK((std::string(c2.reason) == "velocity extremum" ||
           std::string(c2.reason) == "velocity plateau"));
}

TEST_CASE("mirror invariance of the valid set") {
    testkit::Rng rng(17);
    testkit::FuzzConfig cfg;
    cfg.dof_min = cfg.dof_max = 1;
    for (int i = 0; i < 2000; ++i) {
        const InputParameters in = testkit::draw_input(cfg, rng);
        const KinematicState x0 = in.current[0];
        const KinematicState xf = in.target[0];
        const Limits l = in.limits[0];

        const ExtremalSet a = enumerate_extremal(x0, xf, l);
        const Limits ml{-l.v_max, -l.v_min, -l.a_max, -l.a_min, l.j_max};
        const ExtremalSet b = enumerate_extremal({-x0.p, -x0.v, -x0.a}, {-xf.p, -xf.v, -xf.a}, ml);
        REQUIRE(a.ok == b.ok);
        if (!a.ok) {
            continue;
        }
        REQUIRE(a.profiles.size() == b.profiles.size());
        for (std::size_t k = 0; k < a.profiles.size(); ++k) {
            CHECK(a.profiles[k].total ==
                  doctest::Approx(b.profiles[k].total).epsilon(1e-9));
        }
    }
}

TEST_CASE("random single-dof inputs: valid set exists, integrates, 1/3/5") {
    testkit::Rng rng(19);
    testkit::FuzzConfig cfg;
    cfg.dof_min = cfg.dof_max = 1;
    int sizes[6] = {0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 5000; ++i) {
        const InputParameters in = testkit::draw_input(cfg, rng);
        // Step 1 runs on post-brake states in the pipeline; emulate that here.
        const BrakeProfile brake =
            compute_brake(in.current[0].v, in.current[0].a, in.limits[0]);
        const KinematicState x0 =
            brake.empty() ? in.current[0] : brake.integrate(in.current[0]);
        ExtremalSet set = enumerate_extremal(x0, in.target[0], in.limits[0]);
        REQUIRE_MESSAGE(set.ok, "no valid extremal profile for case ", i);
        derive_blocked_intervals(set);
        const std::size_t m = set.profiles.size();
        REQUIRE(m >= 1);
        REQUIRE(m <= 5);
        ++sizes[m];
        CHECK((m == 1 || m == 3 || m == 5));
        for (const Profile& p : set.profiles) {
            check_profile_integrates(p, x0, in.target[0], in.limits[0], false);
        }
    }
    CHECK(sizes[1] > 0);
    CHECK(sizes[3] > 0);  // multi-profile cases must actually occur
}
