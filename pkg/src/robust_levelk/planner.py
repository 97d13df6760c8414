"""Belief-weighted min-max planner for the autonomous vehicle.

For every ego action sequence the planner evaluates the expected cumulative
reward over joint level hypotheses of the opponents (weighted by the product
of per-opponent beliefs), takes the minimum over joint disturbance
realizations, and returns the sequence with the best worst case.

Each opponent's predicted rectangles are inflated by its disturbance set and
translated by one of the set's realizations (corners and origin). A
realization is held fixed over the horizon.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .actions import ActionPair
from .belief import BeliefState, DisturbanceModel, adaptive_set
from .dynamics import rollout_batch
from .geometry import DisturbanceSet, inflate_dims, overlap_arrays, vertices
from .levelk import (LevelPlan, LevelPolicyConfig, TrafficState, candidate_rollouts, level0_plans,
                     level1_plan)
from .reward import combine_stage, discount_sum, ego_features_batch

STRATEGIES = ("nominal", "adaptive", "robust")
TARGETS = ("opponents", "ego")


@dataclass(frozen=True)
class PlannerConfig:
    policy: LevelPolicyConfig = field(default_factory=LevelPolicyConfig)
    disturbance: DisturbanceModel = field(default_factory=DisturbanceModel)
    strategy: str = "adaptive"
    disturbance_target: str = "opponents"

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}")
        if self.disturbance_target not in TARGETS:
            raise ValueError(f"disturbance_target must be one of {TARGETS}")

    @property
    def horizon(self) -> int:
        return self.policy.horizon

    def opponent_set(self, p_level0: float) -> DisturbanceSet:
        if self.strategy == "nominal":
            return DisturbanceSet.empty()
        if self.strategy == "robust":
            return self.disturbance.full
        return adaptive_set(self.disturbance, p_level0)


@dataclass(frozen=True)
class OpponentForecast:
    """Level-0 and level-1 plans of one opponent from the current state."""

    agent_id: int
    plans: Tuple[LevelPlan, LevelPlan]

    def trajectory(self, level: int) -> np.ndarray:
        return self.plans[level].states[1:]

    def first_action(self, level: int) -> ActionPair:
        return self.plans[level].first


def forecast_opponents(ego: int, s: TrafficState, policy: LevelPolicyConfig,
                       level0_cache: Optional[Dict[int, LevelPlan]] = None) -> List[OpponentForecast]:
    cache = level0_cache if level0_cache is not None else level0_plans(s, policy)
    return [OpponentForecast(o.agent_id, (cache[o.agent_id],
                                          level1_plan(o.agent_id, s, policy, cache)))
            for o in s.others(ego)]


@dataclass
class PlanResult:
    action: ActionPair
    indices: Tuple[int, ...]
    sequence: Tuple[ActionPair, ...]
    value: float
    # (S, P) expected reward per sequence and joint realization
    expected: np.ndarray
    sequences: np.ndarray
    realizations: List[Tuple[Tuple[float, float], ...]]

    def records(self) -> Iterator[dict]:
        """Flat diagnostic records: one per (sequence, realization)."""
        for s_i, seq in enumerate(self.sequences):
            for r_i, real in enumerate(self.realizations):
                yield {"sequence": [int(k) for k in seq],
                       "realization": [list(w) for w in real],
                       "reward": float(self.expected[s_i, r_i])}


def _max_box(sets: Sequence[DisturbanceSet]) -> DisturbanceSet:
    live = [w for w in sets if not w.is_empty]
    if not live:
        return DisturbanceSet.empty()
    return DisturbanceSet(max(w.half_width_x for w in live), max(w.half_width_y for w in live))


def _offsets(w: DisturbanceSet) -> np.ndarray:
    pts = vertices(w)
    return np.array(pts if pts else [(0.0, 0.0)], dtype=float)


def evaluate_sequences(ego: int, s: TrafficState, ego_traj: np.ndarray,
                       forecasts: Sequence[OpponentForecast], beliefs: BeliefState,
                       cfg: PlannerConfig):
    """Expected reward for each ego rollout and joint realization.

    Args:
        ego_traj: (S, N + 1, 4) ego rollouts.

    Returns:
        ``(expected, realizations)`` with ``expected`` of shape (S, P).
    """
    me = s.agent(ego)
    pol = cfg.policy
    z = pol.zones
    w = pol.weights
    states = ego_traj[:, 1:, :]
    S, N = states.shape[:2]

    sets = [cfg.opponent_set(beliefs.p_level0(f.agent_id)) for f in forecasts]
    level_sets = [beliefs.levels(f.agent_id) for f in forecasts]

    if cfg.disturbance_target == "ego":
        box = _max_box(sets)
        offs = _offsets(box)
        R = len(offs)
        # (S, N, R, 4) ego states shifted by each realization
        shifted = np.repeat(states[:, :, None, :], R, axis=2)
        shifted[..., 0] += offs[:, 0]
        shifted[..., 1] += offs[:, 1]
        phi2, phi4, phi5, phi6 = ego_features_batch(shifted, s.road, me.objective, z)
        if box.is_empty:
            ec_hl, ec_hw, es_hl, es_hw = z.half_length, z.half_width, z.safe_half_length, z.safe_half_width
        else:
            ec_hl, ec_hw = inflate_dims(z.half_length, z.half_width, shifted[..., 2],
                                        box.half_width_x, box.half_width_y)
            es_hl, es_hw = inflate_dims(z.safe_half_length, z.safe_half_width, shifted[..., 2],
                                        box.half_width_x, box.half_width_y)
        ex = shifted[..., None, 0]
        ey = shifted[..., None, 1]
        epsi = shifted[..., None, 2]
        ec_hl, ec_hw, es_hl, es_hw = (np.asarray(a)[..., None] if np.ndim(a) else a
                                      for a in (ec_hl, ec_hw, es_hl, es_hw))
        hits = []
        for f, lv in zip(forecasts, level_sets):
            # opponent (N, 1, K) nominal rects
            tr = np.stack([f.trajectory(k) for k, _ in lv], axis=-1)  # (N, 4, K)
            ox, oy, opsi = tr[:, None, 0, :], tr[:, None, 1, :], tr[:, None, 2, :]
            coll = overlap_arrays(ex, ey, ec_hl, ec_hw, epsi, ox, oy,
                                  z.half_length, z.half_width, opsi)
            safe = overlap_arrays(ex, ey, es_hl, es_hw, epsi, ox, oy,
                                  z.safe_half_length, z.safe_half_width, opsi)
            hits.append((coll, safe))  # (S, N, R, K)
        r_joint = [np.arange(R) for _ in forecasts]
        realizations = [tuple((float(a), float(b)) for _ in forecasts) for a, b in offs]
        feat_axes = (slice(None), slice(None), slice(None), None)
        P = R
    else:
        phi2, phi4, phi5, phi6 = ego_features_batch(states, s.road, me.objective, z)
        ex = states[:, :, None, None, 0]
        ey = states[:, :, None, None, 1]
        epsi = states[:, :, None, None, 2]
        hits = []
        offs_list = []
        for f, lv, wset in zip(forecasts, level_sets, sets):
            offs = _offsets(wset)
            offs_list.append(offs)
            tr = np.stack([f.trajectory(k) for k, _ in lv], axis=1)  # (N, K, 4)
            ocx = tr[:, :, None, 0] + offs[None, None, :, 0]  # (N, K, R)
            ocy = tr[:, :, None, 1] + offs[None, None, :, 1]
            opsi = np.broadcast_to(tr[:, :, None, 2], ocx.shape)
            c_hl, c_hw, s_hl, s_hw = z.half_length, z.half_width, z.safe_half_length, z.safe_half_width
            if not wset.is_empty:
                c_hl, c_hw = inflate_dims(c_hl, c_hw, opsi, wset.half_width_x, wset.half_width_y)
                s_hl, s_hw = inflate_dims(s_hl, s_hw, opsi, wset.half_width_x, wset.half_width_y)
            coll = overlap_arrays(ex, ey, z.half_length, z.half_width, epsi,
                                  ocx, ocy, c_hl, c_hw, opsi)
            safe = overlap_arrays(ex, ey, z.safe_half_length, z.safe_half_width, epsi,
                                  ocx, ocy, s_hl, s_hw, opsi)
            # reorder to (S, N, R, K)
            hits.append((np.swapaxes(coll, 2, 3), np.swapaxes(safe, 2, 3)))
        joint = list(itertools.product(*[range(len(o)) for o in offs_list]))
        P = len(joint)
        r_joint = [np.array([c[i] for c in joint], dtype=int) for i in range(len(forecasts))]
        realizations = [tuple((float(offs_list[i][c[i], 0]), float(offs_list[i][c[i], 1]))
                              for i in range(len(forecasts))) for c in joint]
        feat_axes = (slice(None), slice(None), None, None)

    level_joint = list(itertools.product(*[range(len(lv)) for lv in level_sets]))
    K = len(level_joint)
    k_joint = [np.array([c[i] for c in level_joint], dtype=int) for i in range(len(forecasts))]
    level_weights = []
    for c in level_joint:
        wt = 1.0
        for i, ki in enumerate(c):
            wt *= level_sets[i][ki][1]
        level_weights.append(wt)

    coll_any = np.zeros((S, N, P, K), dtype=bool)
    safe_any = np.zeros((S, N, P, K), dtype=bool)
    for (coll, safe), ri, ki in zip(hits, r_joint, k_joint):
        coll_any |= coll[:, :, ri[:, None], ki[None, :]]
        safe_any |= safe[:, :, ri[:, None], ki[None, :]]

    stage = combine_stage(w, -coll_any.astype(float), phi2[feat_axes], -safe_any.astype(float),
                          phi4[feat_axes], phi5[feat_axes], phi6[feat_axes])
    cum = discount_sum(np.broadcast_to(stage, (S, N, P, K)), w.lam, axis=1)  # (S, P, K)
    expected = np.zeros((S, P))
    for k, wt in enumerate(level_weights):
        expected = expected + wt * cum[:, :, k]
    return expected, realizations


def plan(ego: int, s: TrafficState, beliefs: BeliefState, cfg: PlannerConfig,
         forecasts: Optional[Sequence[OpponentForecast]] = None) -> PlanResult:
    """Exhaustive max-min over all ego action sequences."""
    me = s.agent(ego)
    if forecasts is None:
        forecasts = forecast_opponents(ego, s, cfg.policy)
    idx, traj = candidate_rollouts(me.state, me.params, cfg.policy.actions, cfg.horizon)
    expected, realizations = evaluate_sequences(ego, s, traj, forecasts, beliefs, cfg)
    worst = expected.min(axis=1)
    b = int(np.argmax(worst))
    acts = cfg.policy.actions.enumerate()
    seq = tuple(int(i) for i in idx[b])
    return PlanResult(action=acts[seq[0]], indices=seq, sequence=tuple(acts[i] for i in seq),
                      value=float(worst[b]), expected=expected, sequences=idx,
                      realizations=realizations)


def worst_case_reward(seq: Sequence[int], ego: int, s: TrafficState, beliefs: BeliefState,
                      cfg: PlannerConfig,
                      forecasts: Optional[Sequence[OpponentForecast]] = None) -> float:
    """Minimum over realizations of the expected reward of one index sequence."""
    if len(seq) != cfg.horizon:
        raise ValueError("sequence length must equal the horizon")
    me = s.agent(ego)
    if forecasts is None:
        forecasts = forecast_opponents(ego, s, cfg.policy)
    accel, steer = cfg.policy.actions.as_arrays()
    ids = np.asarray(seq, dtype=int)[None, :]
    traj = rollout_batch(me.state.as_array(), accel[ids], steer[ids], me.params)
    expected, _ = evaluate_sequences(ego, s, traj, forecasts, beliefs, cfg)
    return float(expected.min(axis=1)[0])
