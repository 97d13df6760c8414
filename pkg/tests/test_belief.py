import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from robust_levelk.actions import ActionPair, ActionSet
from robust_levelk.belief import (BeliefState, DisturbanceModel, adaptive_set, expected_reward,
                                  update_belief)
from robust_levelk.geometry import DisturbanceSet

ACTS = ActionSet().enumerate()


def test_update_examples():
    b = BeliefState({1: (0.5, 0.5)}, 0.1)
    nb = update_belief(b, 1, ACTS[3], ACTS[0], ACTS[3])
    assert nb.probs[1] == pytest.approx((0.5 / 1.1, 0.6 / 1.1))
    assert nb.probs[1][0] == pytest.approx(0.4545, abs=1e-4)
    assert update_belief(b, 1, ACTS[4], ACTS[2], ACTS[2]) is b
    c = BeliefState.initial([1])
    for _ in range(20):
        c = update_belief(c, 1, ACTS[0], ACTS[0], ACTS[5])
    assert c.probs[1] == (1.0, 0.0)


def test_equal_distance_is_a_tie():
    b = BeliefState.initial([7])
    # (0, 0) sits halfway between +2 and -2 accelerations
    assert update_belief(b, 7, ACTS[0], ACTS[3], ACTS[4]) is b


def test_update_only_touches_one_opponent():
    b = BeliefState({1: (0.3, 0.7), 2: (0.6, 0.4)})
    nb = update_belief(b, 2, ACTS[5], ACTS[0], ACTS[5])
    assert nb.probs[1] == (0.3, 0.7)
    with pytest.raises(KeyError):
        update_belief(b, 9, ACTS[0], ACTS[0], ACTS[1])


def test_invalid_beliefs_rejected():
    with pytest.raises(ValueError):
        BeliefState({1: (0.7, 0.7)})
    with pytest.raises(ValueError):
        BeliefState({1: (1.0, 0.0)}, delta_p=0.0)


def test_levels_drop_zero_mass():
    b = BeliefState({1: (1.0, 0.0), 2: (0.25, 0.75)})
    assert b.levels(1) == ((0, 1.0),)
    assert b.levels(2) == ((0, 0.25), (1, 0.75))


def test_normalization_after_random_updates():
    rng = random.Random(11)
    for trial in range(10_000):
        p0 = rng.random()
        b = BeliefState({1: (p0, 1.0 - p0)}, rng.choice([0.05, 0.1, 0.3]))
        for _ in range(rng.randint(1, 8)):
            b = update_belief(b, 1, *(rng.choice(ACTS) for _ in range(3)))
        q0, q1 = b.probs[1]
        assert 0.0 <= q0 <= 1.0 and 0.0 <= q1 <= 1.0
        assert abs(q0 + q1 - 1.0) <= 1e-12, trial


@given(st.floats(0.0, 1.0), st.integers(1, 30))
def test_consistent_level1_evidence_is_monotone(p0, n):
    b = BeliefState({1: (p0, 1.0 - p0)})
    prev = p0
    for _ in range(n):
        b = update_belief(b, 1, ACTS[5], ACTS[0], ACTS[5])
        assert b.p_level0(1) <= prev
        prev = b.p_level0(1)


def test_expected_reward_examples():
    assert expected_reward(-3.0, -8.0, 1.0) == -3.0
    assert expected_reward(-10.0, -2.0, 0.5) == -6.0
    for p in (0.0, 0.3, 1.0):
        assert expected_reward(4.0, 4.0, p) == 4.0
    with pytest.raises(ValueError):
        expected_reward(0, 0, 1.2)


@given(st.floats(-1e4, 0), st.floats(-1e4, 0), st.floats(0, 1))
def test_expected_reward_between_levels(r0, r1, p):
    e = expected_reward(r0, r1, p)
    assert min(r0, r1) - 1e-9 <= e <= max(r0, r1) + 1e-9


def test_adaptive_set_examples():
    m = DisturbanceModel(DisturbanceSet(0.1, 0.05), DisturbanceSet(0.4, 0.2))
    assert adaptive_set(m, 1.0) == m.full
    assert adaptive_set(m, 0.0).as_tuple() == (0.1, 0.05)
    assert adaptive_set(m, 0.5).as_tuple() == pytest.approx((0.3, 0.15))


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 2), st.floats(0, 2), st.floats(0, 2),
       st.floats(0, 2))
def test_adaptive_set_nested(p, q, mx, my, dx, dy):
    m = DisturbanceModel(DisturbanceSet(mx, my), DisturbanceSet(dx, dy))
    lo, hi = sorted((p, q))
    a, b = adaptive_set(m, lo), adaptive_set(m, hi)
    assert a.half_width_x <= b.half_width_x and a.half_width_y <= b.half_width_y
    full = m.full
    assert b.half_width_x <= full.half_width_x and b.half_width_y <= full.half_width_y
