#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "otg/testkit.hpp"
#include "otg/types.hpp"

using namespace otg;

TEST_CASE("integrate_step basic cases") {
    // From rest under unit jerk for one second.
    KinematicState r = integrate_step({0, 0, 0}, 1.0, 1.0);
    CHECK(r.p == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(r.v == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.a == doctest::Approx(1.0).epsilon(1e-15));

    // dt = 0 is the identity.
    KinematicState x{0.3, -1.2, 2.5};
    KinematicState same = integrate_step(x, 17.0, 0.0);
    CHECK(same == x);

    // Uniform motion.
    r = integrate_step({0, 1, 0}, 0.0, 2.0);
    CHECK(r.p == doctest::Approx(2.0));
    CHECK(r.v == doctest::Approx(1.0));
    CHECK(r.a == doctest::Approx(0.0));
}

TEST_CASE("integrate_step composition and mirror properties") {
    testkit::Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        KinematicState x{rng.normal(3.0), rng.normal(2.0), rng.normal(1.0)};
        const double j = rng.normal(2.0);
        const double t1 = std::abs(rng.normal(1.0));
        const double t2 = std::abs(rng.normal(1.0));

        const KinematicState split = integrate_step(integrate_step(x, j, t1), j, t2);
        const KinematicState whole = integrate_step(x, j, t1 + t2);
        const double scale_p = std::max(1.0, std::abs(whole.p));
        const double scale_v = std::max(1.0, std::abs(whole.v));
        const double scale_a = std::max(1.0, std::abs(whole.a));
        CHECK(std::abs(split.p - whole.p) <= 1e-12 * scale_p);
        CHECK(std::abs(split.v - whole.v) <= 1e-12 * scale_v);
        CHECK(std::abs(split.a - whole.a) <= 1e-12 * scale_a);

        // Mirror symmetry is exact in IEEE arithmetic.
        const KinematicState neg = integrate_step({-x.p, -x.v, -x.a}, -j, t1);
        const KinematicState pos = integrate_step(x, j, t1);
        CHECK(neg.p == -pos.p);
        CHECK(neg.v == -pos.v);
        CHECK(neg.a == -pos.a);
    }
}

TEST_CASE("max_target_acceleration") {
    Limits l{-1, 1, -1, 1, 1};
    CHECK(max_target_acceleration(0.0, l) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    Limits degenerate{0.5, 0.5, -1, 1, 1};
    CHECK(max_target_acceleration(0.5, degenerate) == doctest::Approx(0.0));

    Limits l2{-1, 1, -2, 2, 2};
    CHECK(max_target_acceleration(0.5, l2) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-12));

    // Monotone in j_max and in the velocity interval width.
    testkit::Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        const double vf = rng.normal(1.0);
        const double w = std::abs(rng.normal(1.0)) + 0.1;
        Limits a{vf - w, vf + w, -1, 1, 1.0};
        Limits b{vf - w, vf + w, -1, 1, 2.0};
        Limits c{vf - 2 * w, vf + 2 * w, -1, 1, 1.0};
        CHECK(max_target_acceleration(vf, b) >= max_target_acceleration(vf, a));
        CHECK(max_target_acceleration(vf, c) >= max_target_acceleration(vf, a));
    }
}

TEST_CASE("validate_input") {
    InputParameters in;
    in.dof_count = 1;
    in.current = {{0, 0, 0}};
    in.target = {{1, 0, 0}};
    in.limits = {{-1, 1, -1, 1, 1}};
    CHECK(validate_input(in).ok);

    // Target acceleration beyond the reachability bound (within [a_min, a_max]
    // so the reachability rule is the one that fires).
    in.limits = {{-1, 1, -2, 2, 1}};
    in.target = {{1, 0, 1.5}};
    ValidationResult r = validate_input(in);
    CHECK_FALSE(r.ok);
    CHECK(r.error == ValidationError::kTargetAccelerationUnreachable);
    CHECK(r.message.find("unreachable") != std::string::npos);
    CHECK(r.dof == 0);

    // Boundary equality is accepted.
    in.target = {{1, 0, std::sqrt(2.0)}};
    CHECK(validate_input(in).ok);
    in.limits = {{-1, 1, -1, 1, 1}};

    // Degenerate velocity range.
    in.target = {{1, 0.5, 0}};
    in.limits = {{0.5, 0.5, -1, 1, 1}};
    r = validate_input(in);
    CHECK_FALSE(r.ok);
    CHECK(r.error == ValidationError::kDegenerateVelocityRange);

    // Non-finite value.
    in.limits = {{-1, 1, -1, 1, 1}};
    in.current = {{std::nan(""), 0, 0}};
    in.target = {{1, 0, 0}};
    CHECK(validate_input(in).error == ValidationError::kNonFinite);

    // Target velocity at the bound is fine, outside is not.
    in.current = {{0, 0, 0}};
    in.target = {{1, 1.0, 0}};
    CHECK(validate_input(in).ok);
    in.target = {{1, 1.0 + 1e-9, 0}};
    CHECK(validate_input(in).error == ValidationError::kTargetVelocityOutOfRange);
}
