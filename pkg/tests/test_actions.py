import itertools

import pytest

from robust_levelk.actions import (ACTION_LABELS, ActionPair, ActionSet, action_distance,
                                   enumerate_actions, sequence_indices)


def test_enumeration_order():
    acts = enumerate_actions(ActionSet())
    assert len(acts) == 9 == len(ActionSet())
    assert (acts[0].a, acts[0].delta_f, acts[0].label) == (0.0, 0.0, "maintain")
    assert (acts[5].a, acts[5].delta_f, acts[5].label) == (4.0, 0.0, "maximum acceleration")
    assert [(u.a, u.delta_f) for u in acts] == [
        (0, 0), (0, 0.05), (0, -0.05), (2, 0), (-2, 0), (4, 0), (-4, 0), (2, 0.1), (2, -0.1)]
    assert tuple(u.label for u in acts) == ACTION_LABELS


def test_distance_examples():
    u = ActionPair(1.0, 0.05)
    assert action_distance(u, u) == 0
    assert action_distance(ActionPair(1, 0), ActionPair(-1, 0)) == 2
    assert action_distance(ActionPair(0, 0.1), ActionPair(0, -0.1)) == pytest.approx(0.2)


def test_distance_is_metric_on_action_set():
    acts = ActionSet().enumerate()
    for a, b in itertools.product(acts, repeat=2):
        assert action_distance(a, b) >= 0
        assert action_distance(a, b) == action_distance(b, a)
        assert (action_distance(a, b) == 0) == ((a.a, a.delta_f) == (b.a, b.delta_f))
    for a, b, c in itertools.product(acts, repeat=3):
        assert action_distance(a, c) <= action_distance(a, b) + action_distance(b, c) + 1e-12


def test_bounds_and_validation():
    cfg = ActionSet()
    for u in cfg.enumerate():
        assert abs(u.a) <= cfg.a_max and abs(u.delta_f) <= cfg.delta_max
    with pytest.raises(ValueError):
        ActionSet(a_nom=4.0, a_max=4.0)
    with pytest.raises(ValueError):
        ActionSet(delta_nom=0.2, delta_max=0.1)


def test_sequence_indices_lexicographic():
    idx = sequence_indices(9, 2)
    assert idx.shape == (81, 2)
    assert [tuple(r) for r in idx] == list(itertools.product(range(9), repeat=2))
