"""Level-0 and level-1 driver policies.

A level-0 driver treats every other vehicle as a stationary obstacle at its
current pose. A level-1 driver assumes everybody else is level-0 and
best-responds to their (open-loop) level-0 trajectories. Each policy is an
exhaustive search over all ``|actions| ** N`` sequences with ties broken in
favour of the lowest lexicographic index sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .actions import ActionPair, ActionSet, sequence_indices
from .dynamics import VehicleParams, VehicleState, rollout_batch
from .geometry import DisturbanceSet, OrientedRect, RoadGeometry, inflate_dims, overlap_arrays
from .reward import (ObjectiveSpec, RewardWeights, ZoneSpec, combine_stage, discount_sum,
                     ego_features_batch)

ROLES = ("autonomous", "level0", "level1")


@dataclass(frozen=True)
class Agent:
    agent_id: int
    state: VehicleState
    params: VehicleParams
    role: str
    objective: ObjectiveSpec

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")


@dataclass(frozen=True)
class TrafficState:
    agents: Tuple[Agent, ...]
    road: RoadGeometry

    def __post_init__(self):
        if not self.agents:
            raise ValueError("traffic state needs at least one agent")
        ids = [a.agent_id for a in self.agents]
        if len(set(ids)) != len(ids):
            raise ValueError("agent ids must be unique")

    def agent(self, agent_id: int) -> Agent:
        for a in self.agents:
            if a.agent_id == agent_id:
                return a
        raise KeyError(f"unknown agent id {agent_id}")

    def others(self, agent_id: int) -> List[Agent]:
        self.agent(agent_id)
        return [a for a in self.agents if a.agent_id != agent_id]

    @property
    def ids(self) -> List[int]:
        return [a.agent_id for a in self.agents]


@dataclass(frozen=True)
class LevelPolicyConfig:
    horizon: int = 2
    actions: ActionSet = field(default_factory=ActionSet)
    weights: RewardWeights = field(default_factory=RewardWeights)
    zones: ZoneSpec = field(default_factory=ZoneSpec)
    # margin added around other vehicles by simulated humans; empty = nominal
    human_margin: DisturbanceSet = field(default_factory=DisturbanceSet.empty)

    def __post_init__(self):
        if not 1 <= self.horizon <= 3:
            raise ValueError("horizon must be between 1 and 3")


@dataclass(frozen=True)
class LevelPlan:
    indices: Tuple[int, ...]
    actions: Tuple[ActionPair, ...]
    states: np.ndarray  # (N + 1, 4) nominal rollout
    value: float

    @property
    def first(self) -> ActionPair:
        return self.actions[0]


@dataclass
class Occupancy:
    """Predicted collision/safe rectangles of other vehicles over the horizon.

    ``cx, cy, psi`` have shape (M, N); the half dimensions shape (M, N) too.
    """

    cx: np.ndarray
    cy: np.ndarray
    psi: np.ndarray
    c_hl: np.ndarray
    c_hw: np.ndarray
    s_hl: np.ndarray
    s_hw: np.ndarray

    @classmethod
    def from_trajectories(cls, trajs: Sequence[np.ndarray], zones: ZoneSpec,
                          margin: DisturbanceSet = DisturbanceSet.empty()) -> "Occupancy":
        """Build from per-vehicle (N, >=3) arrays of ``x, y, psi``."""
        if not trajs:
            empty = np.zeros((0, 0))
            return cls(empty, empty, empty, empty, empty, empty, empty)
        arr = np.stack([np.asarray(t)[:, :3] for t in trajs])
        cx, cy, psi = arr[..., 0], arr[..., 1], arr[..., 2]
        ones = np.ones_like(cx)
        c_hl, c_hw = zones.half_length * ones, zones.half_width * ones
        s_hl, s_hw = zones.safe_half_length * ones, zones.safe_half_width * ones
        if not margin.is_empty:
            c_hl, c_hw = inflate_dims(c_hl, c_hw, psi, margin.half_width_x, margin.half_width_y)
            s_hl, s_hw = inflate_dims(s_hl, s_hw, psi, margin.half_width_x, margin.half_width_y)
        return cls(cx, cy, psi, c_hl, c_hw, s_hl, s_hw)

    @property
    def count(self) -> int:
        return self.cx.shape[0]

    def rects(self, m: int) -> List[Tuple[OrientedRect, OrientedRect]]:
        return [(OrientedRect(self.cx[m, j], self.cy[m, j], self.c_hl[m, j], self.c_hw[m, j],
                              self.psi[m, j]),
                 OrientedRect(self.cx[m, j], self.cy[m, j], self.s_hl[m, j], self.s_hw[m, j],
                              self.psi[m, j]))
                for j in range(self.cx.shape[1])]


def candidate_rollouts(state: VehicleState, params: VehicleParams, actions: ActionSet,
                       horizon: int):
    """Sequence indices (S, N) and nominal rollouts (S, N + 1, 4) for every sequence."""
    idx = sequence_indices(len(actions), horizon)
    accel, steer = actions.as_arrays()
    traj = rollout_batch(state.as_array(), accel[idx], steer[idx], params)
    return idx, traj


def zone_hits(ego: np.ndarray, occ: Occupancy, zones: ZoneSpec):
    """Collision and safe-zone overlap of ego states (S, N, 4) with each occupied rect.

    Returns two boolean arrays of shape (S, N, M).
    """
    ex = ego[:, :, None, 0]
    ey = ego[:, :, None, 1]
    epsi = ego[:, :, None, 2]
    ox, oy, opsi = occ.cx.T[None], occ.cy.T[None], occ.psi.T[None]
    coll = overlap_arrays(ex, ey, zones.half_length, zones.half_width, epsi,
                          ox, oy, occ.c_hl.T[None], occ.c_hw.T[None], opsi)
    safe = overlap_arrays(ex, ey, zones.safe_half_length, zones.safe_half_width, epsi,
                          ox, oy, occ.s_hl.T[None], occ.s_hw.T[None], opsi)
    return coll, safe


def sequence_values(agent: Agent, road: RoadGeometry, occ: Occupancy, cfg: LevelPolicyConfig):
    """Cumulative reward of every action sequence against fixed predicted occupancy."""
    idx, traj = candidate_rollouts(agent.state, agent.params, cfg.actions, cfg.horizon)
    ego = traj[:, 1:, :]
    phi2, phi4, phi5, phi6 = ego_features_batch(ego, road, agent.objective, cfg.zones)
    if occ.count:
        coll, safe = zone_hits(ego, occ, cfg.zones)
        phi1 = -coll.any(axis=2).astype(float)
        phi3 = -safe.any(axis=2).astype(float)
    else:
        phi1 = phi3 = np.zeros(ego.shape[:2])
    stage = combine_stage(cfg.weights, phi1, phi2, phi3, phi4, phi5, phi6)
    return idx, traj, discount_sum(stage, cfg.weights.lam)


def _best(agent: Agent, road: RoadGeometry, occ: Occupancy, cfg: LevelPolicyConfig) -> LevelPlan:
    idx, traj, values = sequence_values(agent, road, occ, cfg)
    b = int(np.argmax(values))
    acts = cfg.actions.enumerate()
    seq = tuple(int(i) for i in idx[b])
    return LevelPlan(seq, tuple(acts[i] for i in seq), traj[b], float(values[b]))


def frozen_trajectory(agent: Agent, horizon: int) -> np.ndarray:
    return np.tile(agent.state.as_array(), (horizon, 1))


def level0_plan(agent_id: int, s: TrafficState, cfg: LevelPolicyConfig) -> LevelPlan:
    """Best sequence with every other vehicle frozen at its current pose."""
    me = s.agent(agent_id)
    trajs = [frozen_trajectory(o, cfg.horizon) for o in s.others(agent_id)]
    occ = Occupancy.from_trajectories(trajs, cfg.zones, cfg.human_margin)
    return _best(me, s.road, occ, cfg)


def level0_plans(s: TrafficState, cfg: LevelPolicyConfig) -> Dict[int, LevelPlan]:
    return {aid: level0_plan(aid, s, cfg) for aid in s.ids}


def level1_plan(agent_id: int, s: TrafficState, cfg: LevelPolicyConfig,
                level0_cache: Optional[Mapping[int, LevelPlan]] = None) -> LevelPlan:
    """Best response to every other vehicle following its own level-0 plan."""
    me = s.agent(agent_id)
    trajs = []
    for o in s.others(agent_id):
        if level0_cache is not None and o.agent_id in level0_cache:
            plan0 = level0_cache[o.agent_id]
        else:
            plan0 = level0_plan(o.agent_id, s, cfg)
        trajs.append(plan0.states[1:])
    occ = Occupancy.from_trajectories(trajs, cfg.zones, cfg.human_margin)
    return _best(me, s.road, occ, cfg)


def level_plan(agent_id: int, level: int, s: TrafficState, cfg: LevelPolicyConfig,
               level0_cache: Optional[Mapping[int, LevelPlan]] = None) -> LevelPlan:
    if level == 0:
        if level0_cache is not None and agent_id in level0_cache:
            return level0_cache[agent_id]
        return level0_plan(agent_id, s, cfg)
    if level == 1:
        return level1_plan(agent_id, s, cfg, level0_cache)
    raise ValueError("only levels 0 and 1 are supported")


def predict_opponents(ego: int, s: TrafficState, level: int,
                      cfg: LevelPolicyConfig) -> Dict[int, List[OrientedRect]]:
    """Collision rectangles of the other vehicles as assumed by a level-``level`` ego.

    Level 0 sees frozen obstacles; level 1 sees every opponent moving along
    its level-0 plan.
    """
    if level not in (0, 1):
        raise ValueError("only levels 0 and 1 are supported")
    out = {}
    z = cfg.zones
    for o in s.others(ego):
        if level == 0:
            traj = frozen_trajectory(o, cfg.horizon)
        else:
            traj = level0_plan(o.agent_id, s, cfg).states[1:]
        out[o.agent_id] = [OrientedRect(float(x), float(y), z.half_length, z.half_width, float(p))
                           for x, y, p, _ in traj]
    return out
