"""Six-feature stage reward and the discounted cumulative reward.

Features (all non-positive):
    phi1  collision-zone overlap with another vehicle   (-1 / 0)
    phi2  collision zone leaves the road                 (-1 / 0)
    phi3  safe-zone overlap with another vehicle         (-1 / 0)
    phi4  -(|x - x_ref| + |y - y_ref|)
    phi5  -|y - y_lane_center|
    phi6  -|v - v_ref|
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .dynamics import VehicleParams, VehicleState
from .geometry import OrientedRect, RoadGeometry, rect_overlap


@dataclass(frozen=True)
class FeatureVector:
    phi1: float = 0.0
    phi2: float = 0.0
    phi3: float = 0.0
    phi4: float = 0.0
    phi5: float = 0.0
    phi6: float = 0.0

    def as_tuple(self) -> Tuple[float, ...]:
        return (self.phi1, self.phi2, self.phi3, self.phi4, self.phi5, self.phi6)


@dataclass(frozen=True)
class RewardWeights:
    alpha: Tuple[float, float, float, float, float, float] = (1000.0, 1000.0, 100.0, 1.0, 1.0, 1.0)
    lam: float = 0.8

    def __post_init__(self):
        if len(self.alpha) != 6 or any(a <= 0 for a in self.alpha):
            raise ValueError("need six positive feature weights")
        if min(self.alpha[:3]) < 100 * max(self.alpha[3:]):
            raise ValueError("indicator weights must be at least 100x the distance weights")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("discount must lie in [0, 1]")


@dataclass(frozen=True)
class ObjectiveSpec:
    x_ref: float
    y_ref: float
    v_ref: float

    def __post_init__(self):
        if self.v_ref <= 0:
            raise ValueError("v_ref must be positive")


@dataclass(frozen=True)
class ZoneSpec:
    """Collision zone half dimensions and the safe-zone margins around it."""

    half_length: float = 2.5
    half_width: float = 1.0
    safe_margin_long: float = 2.0
    safe_margin_lat: float = 0.4

    def __post_init__(self):
        if self.half_length <= 0 or self.half_width <= 0:
            raise ValueError("collision zone must have positive size")
        if self.safe_margin_long <= 0 or self.safe_margin_lat <= 0:
            raise ValueError("safe zone must strictly contain the collision zone")

    @property
    def safe_half_length(self) -> float:
        return self.half_length + self.safe_margin_long

    @property
    def safe_half_width(self) -> float:
        return self.half_width + self.safe_margin_lat

    def collision_rect(self, s: VehicleState) -> OrientedRect:
        return OrientedRect(s.x, s.y, self.half_length, self.half_width, s.psi)

    def safe_rect(self, s: VehicleState) -> OrientedRect:
        return OrientedRect(s.x, s.y, self.safe_half_length, self.safe_half_width, s.psi)


def features(ego: VehicleState, others: Sequence[Tuple[OrientedRect, OrientedRect]],
             road: RoadGeometry, obj: ObjectiveSpec, zones: ZoneSpec) -> FeatureVector:
    """Evaluate the feature vector for one ego state.

    ``others`` holds one ``(collision_rect, safe_rect)`` pair per other
    vehicle, already inflated by whatever disturbance set applies.
    """
    ego_c = zones.collision_rect(ego)
    ego_s = zones.safe_rect(ego)
    hit = any(rect_overlap(ego_c, c) for c, _ in others)
    near = any(rect_overlap(ego_s, s) for _, s in others)
    off = bool(road.off_road(ego.y, zones.half_length, zones.half_width, ego.psi))
    y_lc = float(road.nearest_lane_center(ego.y))
    return FeatureVector(
        phi1=-1.0 if hit else 0.0,
        phi2=-1.0 if off else 0.0,
        phi3=-1.0 if near else 0.0,
        phi4=-(abs(ego.x - obj.x_ref) + abs(ego.y - obj.y_ref)),
        phi5=-abs(ego.y - y_lc),
        phi6=-abs(ego.v - obj.v_ref),
    )


def stage_reward(f: FeatureVector, w: RewardWeights) -> float:
    total = 0.0
    for a, phi in zip(w.alpha, f.as_tuple()):
        total += a * phi
    return total


def cumulative_reward(stage_rewards: Sequence[float], lam: float) -> float:
    if len(stage_rewards) == 0:
        raise ValueError("need at least one stage reward")
    if not 0.0 <= lam <= 1.0:
        raise ValueError("discount must lie in [0, 1]")
    total = 0.0
    disc = 1.0
    for r in stage_rewards:
        total += disc * r
        disc *= lam
    return total


# -- vectorised evaluation -------------------------------------------------

def ego_features_batch(states: np.ndarray, road: RoadGeometry, obj: ObjectiveSpec,
                       zones: ZoneSpec):
    """phi2, phi4, phi5, phi6 for an array of ego states ``(..., 4)``."""
    x, y, psi, v = states[..., 0], states[..., 1], states[..., 2], states[..., 3]
    phi2 = -road.off_road(y, zones.half_length, zones.half_width, psi).astype(float)
    phi4 = -(np.abs(x - obj.x_ref) + np.abs(y - obj.y_ref))
    phi5 = -np.abs(y - road.nearest_lane_center(y))
    phi6 = -np.abs(v - obj.v_ref)
    return phi2, phi4, phi5, phi6


def combine_stage(w: RewardWeights, phi1, phi2, phi3, phi4, phi5, phi6):
    """Weighted sum, accumulated in feature order to match ``stage_reward``."""
    a = w.alpha
    total = 0.0 + a[0] * phi1
    total = total + a[1] * phi2
    total = total + a[2] * phi3
    total = total + a[3] * phi4
    total = total + a[4] * phi5
    total = total + a[5] * phi6
    return total


def discount_sum(stage: np.ndarray, lam: float, axis: int = -1) -> np.ndarray:
    """Discounted sum along ``axis``, accumulated step by step."""
    stage = np.moveaxis(stage, axis, -1)
    total = np.zeros(stage.shape[:-1])
    disc = 1.0
    for j in range(stage.shape[-1]):
        total = total + disc * stage[..., j]
        disc *= lam
    return total


def dominance_bound(road: RoadGeometry, params: VehicleParams, horizon: int,
                    a_max: float, weights: RewardWeights) -> float:
    """Per-step bound on how much the distance features can differ between sequences.

    Two rollouts from the same state end at most ``2 * v_max * horizon * dt``
    apart in each axis, lane-centre offsets lie within half a lane, and speeds
    differ by at most ``2 * a_max * horizon * dt``.
    """
    reach = params.v_max * horizon * params.dt
    a = weights.alpha
    return (a[3] * 4.0 * reach + a[4] * 0.5 * road.lane_width
            + a[5] * 2.0 * a_max * horizon * params.dt)


def collision_dominates(weights: RewardWeights, bound: float, horizon: int) -> bool:
    """True if one discounted collision outweighs all safe-zone and distance differences.

    Under this condition a sequence with no collision and no off-road step
    always scores above one containing a collision.
    """
    lam = weights.lam
    tail = sum(lam ** j for j in range(horizon))
    return weights.alpha[0] * lam ** (horizon - 1) > tail * (weights.alpha[2] + bound)
