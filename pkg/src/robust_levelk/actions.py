"""The nine-element (acceleration, front steering) action set."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np

ACTION_LABELS = (
    "maintain",
    "turn slightly left",
    "turn slightly right",
    "accelerate",
    "decelerate",
    "maximum acceleration",
    "maximum deceleration",
    "turn left and accelerate",
    "turn right and accelerate",
)


@dataclass(frozen=True)
class ActionPair:
    a: float
    delta_f: float
    label: str = ""


def action_distance(u1: ActionPair, u2: ActionPair) -> float:
    """L1 distance between two input pairs (mixed units, by construction)."""
    return abs(u1.a - u2.a) + abs(u1.delta_f - u2.delta_f)


@dataclass(frozen=True)
class ActionSet:
    a_nom: float = 2.0
    a_max: float = 4.0
    delta_nom: float = 0.05
    delta_max: float = 0.1

    def __post_init__(self):
        if not 0 < self.a_nom < self.a_max:
            raise ValueError("need 0 < a_nom < a_max")
        if not 0 < self.delta_nom <= self.delta_max:
            raise ValueError("need 0 < delta_nom <= delta_max")

    def enumerate(self) -> List[ActionPair]:
        an, am, dn, dm = self.a_nom, self.a_max, self.delta_nom, self.delta_max
        pairs = [(0.0, 0.0), (0.0, dn), (0.0, -dn), (an, 0.0), (-an, 0.0),
                 (am, 0.0), (-am, 0.0), (an, dm), (an, -dm)]
        return [ActionPair(a, d, lab) for (a, d), lab in zip(pairs, ACTION_LABELS)]

    def __len__(self) -> int:
        return len(ACTION_LABELS)

    def __getitem__(self, index: int) -> ActionPair:
        return self.enumerate()[index]

    def as_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        acts = self.enumerate()
        return (np.array([u.a for u in acts]), np.array([u.delta_f for u in acts]))


def enumerate_actions(action_set: ActionSet) -> List[ActionPair]:
    return action_set.enumerate()


@lru_cache(maxsize=None)
def sequence_indices(n_actions: int, horizon: int) -> np.ndarray:
    """All index sequences in lexicographic order, shape (n_actions**horizon, horizon)."""
    idx = np.array(list(itertools.product(range(n_actions), repeat=horizon)), dtype=int)
    idx.setflags(write=False)
    return idx
