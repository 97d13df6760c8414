"""Closed-loop multi-agent highway simulation and Monte Carlo batching.

All agents decide from the same snapshot, then all advance through the true
plant. Human agents replan every step with their level-k policy; the
autonomous vehicle uses the min-max planner with its current beliefs and
afterwards updates them from the actions the humans actually applied.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .belief import BeliefState, update_belief
from .dynamics import VehicleState, step_true
from .geometry import RoadGeometry, rect_overlap
from .levelk import Agent, TrafficState, level0_plans, level1_plan
from .planner import OpponentForecast, plan
from .scenario import ConfigError, ScenarioConfig, check_initial_overlap

log = logging.getLogger(__name__)

LANE_TOL_FRACTION = 0.25
HEADING_TOL = 0.05
SETTLE_WINDOW = 2


@dataclass
class StepRecord:
    step: int
    time: float
    states: Dict[int, VehicleState]
    actions: Dict[int, str]
    p_level0: Dict[int, float]
    set_half_widths: Dict[int, Tuple[float, float]]
    collision: bool = False
    off_road: bool = False
    lane_change_complete: bool = False


@dataclass
class RunSummary:
    collided: bool
    lane_change_completed: bool
    completion_x: Optional[float]
    steps: int
    seed: int

    def as_dict(self) -> dict:
        return {"collided": self.collided, "lane_change_completed": self.lane_change_completed,
                "completion_x": self.completion_x, "steps": self.steps, "seed": self.seed}


def detect_lane_change_complete(history: Sequence[VehicleState], target_lane: int,
                                road: RoadGeometry):
    """Settled in the target lane for two consecutive steps.

    Returns ``(complete, completion_x)`` where ``completion_x`` is the ego x
    at the first step of the first settled window.
    """
    y_t = road.lane_center_y(target_lane)
    tol = LANE_TOL_FRACTION * road.lane_width
    run = 0
    for i, st in enumerate(history):
        if abs(st.y - y_t) <= tol and abs(st.psi) < HEADING_TOL:
            run += 1
            if run == SETTLE_WINDOW:
                return True, history[i - SETTLE_WINDOW + 1].x
        else:
            run = 0
    return False, None


def any_collision(agents: Sequence[Agent], zones) -> bool:
    rects = [zones.collision_rect(a.state) for a in agents]
    return any(rect_overlap(rects[i], rects[j])
               for i in range(len(rects)) for j in range(i + 1, len(rects)))


def any_off_road(agents: Sequence[Agent], road: RoadGeometry, zones) -> bool:
    return any(bool(road.off_road(a.state.y, zones.half_length, zones.half_width, a.state.psi))
               for a in agents)


def run(config: ScenarioConfig, seed: Optional[int] = None,
        x_offsets: Optional[Dict[int, float]] = None) -> Tuple[List[StepRecord], RunSummary]:
    """Simulate one episode.

    ``seed`` defaults to the scenario's base seed; ``x_offsets`` shifts the
    initial longitudinal position of individual agents.
    """
    seed = config.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    agents = config.build_agents(x_offsets)
    road = config.road
    policy = config.policy
    pcfg = config.planner_config()
    zones = policy.zones
    av_id = config.av.agent_id
    opp_ids = config.opponent_ids
    beliefs = BeliefState.initial(opp_ids, config.delta_p)
    acts = policy.actions.enumerate()
    nb = config.noise_box

    records: List[StepRecord] = []
    ego_hist = [next(a for a in agents if a.agent_id == av_id).state]
    collided = off_road = False
    completed, completion_x = False, None
    completed_at = None

    for k in range(config.max_steps + 1):
        s = TrafficState(tuple(agents), road)
        rec = StepRecord(step=k, time=k * config.dt,
                         states={a.agent_id: a.state for a in agents}, actions={},
                         p_level0={i: beliefs.p_level0(i) for i in opp_ids},
                         set_half_widths={i: pcfg.opponent_set(beliefs.p_level0(i)).as_tuple()
                                          for i in opp_ids},
                         collision=collided, off_road=off_road,
                         lane_change_complete=completed)
        records.append(rec)
        if collided or k == config.max_steps:
            break
        if completed and k - completed_at >= config.settle_steps:
            break

        cache = level0_plans(s, policy)
        l1 = {i: level1_plan(i, s, policy, cache) for i in opp_ids}
        applied = {}
        for a in agents:
            if a.agent_id == av_id:
                continue
            applied[a.agent_id] = (cache[a.agent_id] if a.role == "level0"
                                   else l1[a.agent_id]).first
        forecasts = [OpponentForecast(i, (cache[i], l1[i])) for i in opp_ids]
        result = plan(av_id, s, beliefs, pcfg, forecasts)
        applied[av_id] = result.action
        rec.actions = {aid: u.label for aid, u in applied.items()}

        nxt = []
        for a in agents:
            if config.noise_enabled and not nb.is_empty:
                w = (rng.uniform(-nb.half_width_x, nb.half_width_x),
                     rng.uniform(-nb.half_width_y, nb.half_width_y))
            else:
                w = (0.0, 0.0)
            if a.agent_id == av_id and config.freeze_av:
                nxt.append(a)
                continue
            nxt.append(replace(a, state=step_true(a.state, applied[a.agent_id], a.params, w)))
        agents = nxt

        for i in opp_ids:
            beliefs = update_belief(beliefs, i, applied[i], cache[i].first, l1[i].first)

        ego_state = next(a for a in agents if a.agent_id == av_id).state
        ego_hist.append(ego_state)
        collided = collided or any_collision(agents, zones)
        off_road = off_road or any_off_road(agents, road, zones)
        if not completed and not collided:
            completed, completion_x = detect_lane_change_complete(ego_hist, config.target_lane,
                                                                  road)
            if completed:
                completed_at = k + 1

    summary = RunSummary(collided=collided, lane_change_completed=completed,
                         completion_x=completion_x, steps=len(records) - 1, seed=seed)
    log.debug("run seed=%d strategy=%s: %s", seed, config.strategy, summary)
    return records, summary


def randomized_offsets(config: ScenarioConfig, rng: np.random.Generator,
                       max_tries: int = 100) -> Dict[int, float]:
    """Uniform longitudinal jitter for every human agent, redrawn on overlap."""
    for _ in range(max_tries):
        offs = {i: float(rng.uniform(-config.x_jitter, config.x_jitter))
                for i in config.opponent_ids}
        try:
            check_initial_overlap(config, offs)
            return offs
        except ConfigError:
            continue
    raise ConfigError("run.x_jitter", "could not draw a non-overlapping initial layout")


@dataclass
class MonteCarloResult:
    strategy: str
    runs: int
    collision_rate: float
    lane_change_rate: float
    mean_completion_x: Optional[float]
    summaries: List[RunSummary] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"strategy": self.strategy, "runs": self.runs,
                "collision_rate": self.collision_rate,
                "lane_change_rate": self.lane_change_rate,
                "mean_completion_x": self.mean_completion_x,
                "summaries": [s.as_dict() for s in self.summaries]}


def monte_carlo(config: ScenarioConfig, runs: int) -> MonteCarloResult:
    """Independent runs with jittered initial gaps and plant noise switched on.

    Run ``i`` uses seed ``config.seed + i`` for both the layout and the noise,
    so the same run index sees the same traffic under every strategy.
    """
    if runs < 1:
        raise ValueError("runs must be at least 1")
    cfg = replace(config, noise_enabled=True)
    summaries = []
    for i in range(runs):
        seed = config.seed + i
        offs = randomized_offsets(cfg, np.random.default_rng([seed, 1]))
        summaries.append(run(cfg, seed=seed, x_offsets=offs)[1])
    collisions = sum(s.collided for s in summaries)
    changes = sum(s.lane_change_completed for s in summaries)
    xs = [s.completion_x for s in summaries if s.lane_change_completed]
    return MonteCarloResult(config.strategy, runs, collisions / runs, changes / runs,
                            float(np.mean(xs)) if xs else None, summaries)
