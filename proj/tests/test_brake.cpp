#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "otg/brake.hpp"
#include "otg/testkit.hpp"
#include "otg/tolerances.hpp"

using namespace otg;

namespace {

Limits mirror(const Limits& l) {
    return Limits{-l.v_max, -l.v_min, -l.a_max, -l.a_min, l.j_max};
}

// Forward-integrate a brake profile at fine resolution and track whether any
// constraint satisfied at t=0 gets broken along the way.
struct BrakeSim {
    KinematicState end;
    bool new_violation = false;
};

BrakeSim simulate(const BrakeProfile& b, double v0, double a0, const Limits& l) {
    BrakeSim sim;
    KinematicState x{0.0, v0, a0};
    const double eps = 1e-9;
    // A velocity bound counts as satisfied at the start only if it is neither
    // violated nor inevitably violated (the jerk-limited recovery of the
    // acceleration already overshoots it).
    const double j = l.j_max;
    const double v_settle = a0 > 0 ? v0 + a0 * a0 / (2 * j) : v0 - a0 * a0 / (2 * j);
    const bool v_hi_ok = v0 <= l.v_max + eps && v_settle <= l.v_max + eps;
    const bool v_lo_ok = v0 >= l.v_min - eps && v_settle >= l.v_min - eps;
    const bool a_hi_ok = a0 <= l.a_max + eps;
    const bool a_lo_ok = a0 >= l.a_min - eps;
    for (int k = 0; k < 2; ++k) {
        const int steps = 1000;
        for (int s = 1; s <= steps; ++s) {
            const KinematicState y = integrate_step(x, b.j[k], b.t[k] * s / steps);
            if ((v_hi_ok && y.v > l.v_max + 1e-6) || (v_lo_ok && y.v < l.v_min - 1e-6) ||
                (a_hi_ok && y.a > l.a_max + 1e-6) || (a_lo_ok && y.a < l.a_min - 1e-6)) {
                sim.new_violation = true;
            }
        }
        x = integrate_step(x, b.j[k], b.t[k]);
    }
    sim.end = x;
    return sim;
}

}  // namespace

TEST_CASE("already safe state needs no brake") {
    Limits l{-1, 1, -1, 1, 1};
    CHECK(compute_brake(0.0, 0.0, l).empty());
    CHECK(compute_brake(0.5, 0.3, l).empty());
    // Boundary-exact states need no brake.
    CHECK(compute_brake(1.0, 0.0, l).empty());
}

TEST_CASE("acceleration violation ramps back to the limit") {
    // Evaluated against the decision branches: recovery does not cross the
    // velocity window, so a single ramp step suffices.
    Limits l{-10, 10, -1, 1, 1};
    const BrakeProfile b = compute_brake(0.0, 2.0, l);
    CHECK(b.t[0] == doctest::Approx(1.0));
    CHECK(b.j[0] == doctest::Approx(-1.0));
    CHECK(b.t[1] == doctest::Approx(0.0));
    const KinematicState end = b.integrate({0, 0, 2});
    CHECK(end.a == doctest::Approx(1.0));
    CHECK(end.v == doctest::Approx(1.5));
}

TEST_CASE("velocity violation brakes in two phases onto the bound") {
    Limits l{-1, 1, -1, 1, 1};
    const BrakeProfile b = compute_brake(2.0, 0.0, l);
    CHECK(b.t[0] > 0);
    CHECK(b.t[1] > 0);
    const KinematicState end = b.integrate({0, 2, 0});
    CHECK(end.v == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(end.a >= l.a_min - 1e-12);
    CHECK(end.a <= l.a_max + 1e-12);
}

TEST_CASE("post-brake state is safe over random draws") {
    testkit::Rng rng(41);
    int braked = 0;
    for (int i = 0; i < 200000; ++i) {
        Limits l;
        l.v_max = rng.gamma2(2.0) + 0.05;
        l.a_max = rng.gamma2(2.0) + 0.05;
        l.j_max = rng.gamma2(2.0) + 0.05;
        l.v_min = -(rng.gamma2(2.0) + 0.05);
        l.a_min = -(rng.gamma2(2.0) + 0.05);
        const double v0 = rng.normal(2.0);
        const double a0 = rng.normal(2.0);
        const BrakeProfile b = compute_brake(v0, a0, l);
        if (b.empty()) {
            continue;
        }
        ++braked;
        const BrakeSim sim = simulate(b, v0, a0, l);
        // Acceleration always recovers into range.
        CHECK(sim.end.a >= l.a_min - 1e-9);
        CHECK(sim.end.a <= l.a_max + 1e-9);
        // No constraint that held at the start may break during the brake.
        CHECK_FALSE(sim.new_violation);
        // Velocity either recovers or ends on the recovery margin, from which
        // ramping the acceleration to zero stays inside the window.
        const double j = l.j_max;
        const double v_settle =
            sim.end.a > 0 ? sim.end.v + sim.end.a * sim.end.a / (2 * j)
                          : sim.end.v - sim.end.a * sim.end.a / (2 * j);
        CHECK(v_settle >= l.v_min - 1e-6);
        CHECK(v_settle <= l.v_max + 1e-6);
    }
    CHECK(braked > 1000);
}

TEST_CASE("mirror symmetry") {
    testkit::Rng rng(43);
    for (int i = 0; i < 20000; ++i) {
        Limits l;
        l.v_max = rng.gamma2(2.0) + 0.05;
        l.a_max = rng.gamma2(2.0) + 0.05;
        l.j_max = rng.gamma2(2.0) + 0.05;
        l.v_min = -(rng.gamma2(2.0) + 0.05);
        l.a_min = -(rng.gamma2(2.0) + 0.05);
        const double v0 = rng.normal(2.0);
        const double a0 = rng.normal(2.0);
        const BrakeProfile b = compute_brake(v0, a0, l);
        const BrakeProfile m = compute_brake(-v0, -a0, mirror(l));
        CHECK(b.t[0] == doctest::Approx(m.t[0]).epsilon(1e-12));
        CHECK(b.t[1] == doctest::Approx(m.t[1]).epsilon(1e-12));
        CHECK(b.j[0] == doctest::Approx(-m.j[0]).epsilon(1e-12));
        CHECK(b.j[1] == doctest::Approx(-m.j[1]).epsilon(1e-12));
    }
}

TEST_CASE("velocity-interface brake handles only acceleration") {
    Limits l{-1, 1, -1, 1, 2};
    BrakeProfile b = compute_velocity_brake(3.0, l);
    CHECK(b.j[0] == doctest::Approx(-2.0));
    CHECK(b.t[0] == doctest::Approx(1.0));
    b = compute_velocity_brake(-2.0, l);
    CHECK(b.j[0] == doctest::Approx(2.0));
    CHECK(b.t[0] == doctest::Approx(0.5));
    CHECK(compute_velocity_brake(0.5, l).empty());
}
