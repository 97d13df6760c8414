import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from robust_levelk.actions import ActionPair, ActionSet
from robust_levelk.dynamics import (VehicleParams, VehicleState, rollout, rollout_batch,
                                    slip_angle, step_nominal, step_true, wrap_angle)

P = VehicleParams(l_f=1.5, l_r=1.5, dt=0.5)
states = st.builds(VehicleState, st.floats(-100, 100), st.floats(-10, 10),
                   st.floats(-math.pi, math.pi), st.floats(0, 35))
inputs = st.builds(ActionPair, st.floats(-4, 4), st.floats(-0.1, 0.1))


def test_slip_angle_examples():
    assert slip_angle(0.0, P) == 0.0
    assert slip_angle(0.1, P) == pytest.approx(math.atan(math.tan(0.1) / 2))
    assert slip_angle(0.1, P) == pytest.approx(0.050125, abs=1e-6)
    with pytest.raises(ValueError):
        slip_angle(math.pi / 2, P)


def test_step_examples():
    s0 = VehicleState(0, 0, 0, 0)
    assert step_nominal(s0, ActionPair(0, 0), P) == s0
    s = step_nominal(VehicleState(0, 0, 0, 10), ActionPair(0, 0), P)
    assert (s.x, s.y, s.psi, s.v) == (5.0, 0.0, 0.0, 10.0)
    assert step_nominal(VehicleState(0, 0, 0, 10), ActionPair(2, 0), P).v == 11.0


def test_step_true_examples():
    s = VehicleState(0, 0, 0, 10)
    u = ActionPair(0, 0)
    assert step_true(s, u, P, (0.0, 0.0)) == step_nominal(s, u, P)
    t = step_true(s, u, P, (0.1, -0.05))
    assert (t.x, t.y) == pytest.approx((5.1, -0.05))
    t = step_true(VehicleState(0, 0, 0.3, 0), u, P, (0.2, 0.1))
    assert (t.x, t.y, t.psi, t.v) == pytest.approx((0.2, 0.1, 0.3, 0.0))


def test_rollout_examples():
    s = VehicleState(0, 0, 0, 10)
    u = ActionPair(0, 0)
    assert rollout(s, [u], P) == [s, step_nominal(s, u, P)]
    assert [x.x for x in rollout(s, [u, u], P)] == [0.0, 5.0, 10.0]
    still = rollout(VehicleState(3, 1, 0.2, 0), [ActionPair(0, 0.1), ActionPair(0, -0.05)], P)
    assert {(x.x, x.y) for x in still} == {(3, 1)}
    with pytest.raises(ValueError):
        rollout(s, [], P)


def test_speed_clamped():
    s = step_nominal(VehicleState(0, 0, 0, 1.0), ActionPair(-4, 0), P)
    assert s.v == 0.0
    fast = step_nominal(VehicleState(0, 0, 0, 39.5), ActionPair(4, 0), P)
    assert fast.v == P.v_max


def test_state_validation():
    with pytest.raises(ValueError):
        VehicleState(0, 0, 0, -1)
    with pytest.raises(ValueError):
        VehicleState(float("nan"), 0, 0, 1)


def test_wrap_angle():
    assert wrap_angle(math.pi) == pytest.approx(math.pi)
    assert wrap_angle(-math.pi) == pytest.approx(math.pi)
    assert wrap_angle(3 * math.pi / 2) == pytest.approx(-math.pi / 2)


@given(states, inputs)
def test_zero_disturbance_equivalence(s, u):
    assert step_true(s, u, P, (0.0, 0.0)) == step_nominal(s, u, P)


@given(st.floats(-100, 100), st.floats(-10, 10), st.floats(0, 35), st.floats(-4, 4))
def test_straight_line(x, y, v, a):
    s = step_nominal(VehicleState(x, y, 0.0, v), ActionPair(a, 0.0), P)
    assert s.y == y and s.psi == 0.0


@given(states, st.floats(-0.1, 0.1))
def test_constant_speed(s, d):
    assert step_nominal(s, ActionPair(0.0, d), P).v == s.v


@given(st.floats(0.1, 35), st.floats(0.001, 0.1))
def test_yaw_sign_follows_steering(v, d):
    s = VehicleState(0, 0, 0, v)
    assert step_nominal(s, ActionPair(0, d), P).psi > 0
    assert step_nominal(s, ActionPair(0, -d), P).psi < 0


@given(states, st.lists(st.integers(0, 8), min_size=1, max_size=3),
       st.lists(st.integers(0, 8), min_size=1, max_size=3))
def test_rollout_composes(s, first, second):
    acts = ActionSet().enumerate()
    a, b = [acts[i] for i in first], [acts[i] for i in second]
    whole = rollout(s, a + b, P)
    split = rollout(s, a, P)
    split += rollout(split[-1], b, P)[1:]
    assert whole == split


def test_batch_matches_scalar_bitwise():
    rng = np.random.default_rng(7)
    acts = ActionSet()
    accel, steer = acts.as_arrays()
    for _ in range(50):
        s = VehicleState(*rng.uniform(-50, 50, 2), rng.uniform(-0.5, 0.5), rng.uniform(0, 30))
        idx = rng.integers(0, 9, size=(20, 3))
        out = rollout_batch(s.as_array(), accel[idx], steer[idx], P)
        for row, seq in zip(out, idx):
            ref = rollout(s, [acts[i] for i in seq], P)
            assert np.array_equal(row, np.array([r.as_array() for r in ref]))
