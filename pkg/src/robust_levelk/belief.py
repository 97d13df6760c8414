"""Per-opponent belief over driver levels and the adaptive disturbance set."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Tuple

from .actions import ActionPair, action_distance
from .geometry import DisturbanceSet, minkowski_sum, scale


@dataclass(frozen=True)
class BeliefState:
    """``probs[agent_id] = (p_level0, p_level1)``; starts at level-0 certainty."""

    probs: Mapping[int, Tuple[float, float]]
    delta_p: float = 0.1

    def __post_init__(self):
        if self.delta_p <= 0:
            raise ValueError("delta_p must be positive")
        for aid, (p0, p1) in self.probs.items():
            if not (0.0 <= p0 <= 1.0 and 0.0 <= p1 <= 1.0) or abs(p0 + p1 - 1.0) > 1e-12:
                raise ValueError(f"invalid belief for agent {aid}: {(p0, p1)}")

    @classmethod
    def initial(cls, opponent_ids: Iterable[int], delta_p: float = 0.1) -> "BeliefState":
        return cls({aid: (1.0, 0.0) for aid in opponent_ids}, delta_p)

    def p_level0(self, agent_id: int) -> float:
        if agent_id not in self.probs:
            raise KeyError(f"no belief held for agent {agent_id}")
        return self.probs[agent_id][0]

    def levels(self, agent_id: int) -> Tuple[Tuple[int, float], ...]:
        """Levels with non-zero probability, as ``(level, probability)`` pairs."""
        p0, p1 = self.probs[agent_id]
        return tuple((k, p) for k, p in ((0, p0), (1, p1)) if p > 0.0)


def update_belief(b: BeliefState, opponent: int, actual: ActionPair,
                  predicted_l0: ActionPair, predicted_l1: ActionPair) -> BeliefState:
    """Reward the level whose predicted action is closest to what was done.

    Equal distances (including identical predictions) leave the belief as is.
    """
    if opponent not in b.probs:
        raise KeyError(f"no belief held for agent {opponent}")
    d0 = action_distance(actual, predicted_l0)
    d1 = action_distance(actual, predicted_l1)
    if d0 == d1:
        return b
    p = list(b.probs[opponent])
    p[0 if d0 < d1 else 1] += b.delta_p
    total = p[0] + p[1]
    probs: Dict[int, Tuple[float, float]] = dict(b.probs)
    probs[opponent] = (p[0] / total, p[1] / total)
    return BeliefState(probs, b.delta_p)


def expected_reward(r_l0: float, r_l1: float, p_level0: float) -> float:
    if not 0.0 <= p_level0 <= 1.0:
        raise ValueError("probability must lie in [0, 1]")
    return p_level0 * r_l0 + (1.0 - p_level0) * r_l1


@dataclass(frozen=True)
class DisturbanceModel:
    """Model-mismatch and driver-model uncertainty boxes."""

    w_model: DisturbanceSet = field(default_factory=lambda: DisturbanceSet(0.1, 0.05))
    w_driver: DisturbanceSet = field(default_factory=lambda: DisturbanceSet(0.5, 0.25))

    @property
    def full(self) -> DisturbanceSet:
        return minkowski_sum(self.w_model, self.w_driver)


def adaptive_set(m: DisturbanceModel, p_level0: float) -> DisturbanceSet:
    return minkowski_sum(m.w_model, scale(m.w_driver, p_level0))
