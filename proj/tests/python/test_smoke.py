"""Python smoke tests for the _otg extension module."""

import math
import sys

import _otg as otg


def approx(a, b, tol=1e-9):
    return abs(a - b) <= tol


def test_rest_to_rest():
    inp = otg.InputParameters(
        dof_count=1,
        current=[otg.KinematicState(0, 0, 0)],
        target=[otg.KinematicState(0.25, 0, 0)],
        limits=[otg.Limits(max_velocity=1, max_acceleration=1, max_jerk=1)],
    )
    ok, msg = otg.validate_input(inp)
    assert ok, msg
    traj = otg.calculate(inp)
    assert approx(traj.duration, 2.0), traj.duration
    states, jerks = traj.at_time(1.0)
    assert approx(states[0].position, 0.125, 1e-9)
    states, _ = traj.at_time(traj.duration)
    assert approx(states[0].position, 0.25, 1e-8)
    assert approx(states[0].velocity, 0.0, 1e-8)


def test_synchronization():
    inp = otg.InputParameters(
        dof_count=2,
        current=[otg.KinematicState(0, 0, 0), otg.KinematicState(0, 0, 0)],
        target=[otg.KinematicState(0.25, 0, 0), otg.KinematicState(2.0, 0, 0)],
        limits=[otg.Limits(1, 1, 1), otg.Limits(1, 1, 1)],
    )
    traj = otg.calculate(inp)
    assert traj.limiting_dof == 1
    states, _ = traj.at_time(traj.duration)
    assert approx(states[0].position, 0.25, 1e-8)
    assert approx(states[1].position, 2.0, 1e-8)
    assert len(traj.independent_min_durations) == 2


def test_invalid_input_raises():
    inp = otg.InputParameters(
        dof_count=1,
        current=[otg.KinematicState(0, 0, 0)],
        target=[otg.KinematicState(1, 0, 5.0)],  # unreachable target acceleration
        limits=[otg.Limits(1, 10, 1)],
    )
    ok, msg = otg.validate_input(inp)
    assert not ok and "unreachable" in msg
    try:
        otg.calculate(inp)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")


def test_generator_loop():
    inp = otg.InputParameters(
        dof_count=1,
        current=[otg.KinematicState(0, 0, 0)],
        target=[otg.KinematicState(0.25, 0, 0)],
        limits=[otg.Limits(1, 1, 1)],
    )
    gen = otg.Generator(1)
    recomputes = 0
    finished = False
    for _ in range(2500):
        states, jerks, recomputed, finished = gen.update(inp, 0.001)
        recomputes += int(recomputed)
    assert recomputes == 1
    assert finished
    assert approx(states[0].position, 0.25, 1e-6)


def test_velocity_interface():
    inp = otg.InputParameters(
        dof_count=1,
        current=[otg.KinematicState(0, 0, 0)],
        target=[otg.KinematicState(0, 1.0, 0)],
        limits=[otg.Limits(100, 1, 1)],
    )
    traj = otg.calculate_velocity(inp)
    assert approx(traj.duration, 2.0), traj.duration


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"{t.__name__}: ok")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
