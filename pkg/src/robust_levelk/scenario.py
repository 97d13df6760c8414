"""Scenario files: YAML documents with a fixed set of top-level sections.

Schema (all lengths in m, speeds in m/s, angles in rad)::

    road:          {lane_count, lane_width, road_length}
    agents:        - {id, role: autonomous|level0|level1, lane, x, v, psi?, v_ref?}
    av_objective:  {target_lane, x_ref, v_ref}
    strategy:      nominal | adaptive | robust
    disturbance:   {w_model: [wx, wy], w_driver: [wx, wy], target?: opponents|ego}
    noise:         {enabled: bool, box: [wx, wy]}
    seeds:         {base: int}
    run:           {dt, horizon, max_steps, settle_steps, delta_p, human_x_ref,
                    freeze_av?, human_margin?: [wx, wy] | null, x_jitter,
                    vehicle: {l_f, l_r, v_max},
                    actions: {a_nom, a_max, delta_nom, delta_max},
                    weights: {alpha: [6 values], lambda},
                    zones: {half_length, half_width, safe_margin_long, safe_margin_lat}}

Sections other than ``road``, ``agents`` and ``av_objective`` are optional
and fall back to library defaults.
"""

from __future__ import annotations

import copy
import os
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

import yaml

from .actions import ActionSet
from .belief import DisturbanceModel
from .dynamics import VehicleParams, VehicleState
from .geometry import DisturbanceSet, RoadGeometry, rect_overlap
from .levelk import ROLES, Agent, LevelPolicyConfig
from .planner import STRATEGIES, TARGETS, PlannerConfig
from .reward import (ObjectiveSpec, RewardWeights, ZoneSpec, collision_dominates,
                     dominance_bound)

TOP_LEVEL_KEYS = ("road", "agents", "av_objective", "strategy", "disturbance", "noise",
                  "seeds", "run")


class ConfigError(ValueError):
    """Invalid scenario; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class AgentSpec:
    agent_id: int
    role: str
    lane: int
    x: float
    v: float
    psi: float = 0.0
    v_ref: Optional[float] = None


@dataclass(frozen=True)
class ScenarioConfig:
    road: RoadGeometry
    agents: Tuple[AgentSpec, ...]
    target_lane: int
    av_x_ref: float
    av_v_ref: float
    strategy: str = "adaptive"
    disturbance: DisturbanceModel = field(default_factory=DisturbanceModel)
    disturbance_target: str = "opponents"
    noise_enabled: bool = False
    noise_box: DisturbanceSet = field(default_factory=lambda: DisturbanceSet(0.1, 0.05))
    seed: int = 0
    dt: float = 0.5
    horizon: int = 2
    max_steps: int = 40
    settle_steps: int = 0
    delta_p: float = 0.1
    human_x_ref: float = 1000.0
    x_jitter: float = 10.0
    freeze_av: bool = False
    vehicle: VehicleParams = field(default_factory=VehicleParams)
    policy: LevelPolicyConfig = field(default_factory=LevelPolicyConfig)

    @property
    def av(self) -> AgentSpec:
        return next(a for a in self.agents if a.role == "autonomous")

    @property
    def opponent_ids(self) -> List[int]:
        return [a.agent_id for a in self.agents if a.role != "autonomous"]

    def planner_config(self) -> PlannerConfig:
        return PlannerConfig(self.policy, self.disturbance, self.strategy,
                             self.disturbance_target)

    def with_overrides(self, **kw) -> "ScenarioConfig":
        return replace(self, **kw)

    def build_agents(self, x_offsets: Optional[Dict[int, float]] = None) -> List[Agent]:
        out = []
        for a in self.agents:
            dx = (x_offsets or {}).get(a.agent_id, 0.0)
            y = self.road.lane_center_y(a.lane)
            if a.role == "autonomous":
                obj = ObjectiveSpec(self.av_x_ref, self.road.lane_center_y(self.target_lane),
                                    self.av_v_ref)
            else:
                obj = ObjectiveSpec(self.human_x_ref, y, a.v_ref if a.v_ref else a.v)
            out.append(Agent(a.agent_id, VehicleState(a.x + dx, y, a.psi, a.v), self.vehicle,
                             a.role, obj))
        return out


def _pair(value, name) -> DisturbanceSet:
    if value is None:
        return DisturbanceSet.empty()
    try:
        wx, wy = (float(v) for v in value)
        return DisturbanceSet(wx, wy)
    except (TypeError, ValueError) as exc:
        raise ConfigError(name, f"expected a pair of non-negative numbers, got {value!r}") from exc


def _section(doc: Dict[str, Any], key: str) -> Dict[str, Any]:
    sec = doc.get(key) or {}
    if not isinstance(sec, dict):
        raise ConfigError(key, "expected a mapping")
    return sec


def _build(name: str, factory, kwargs: Dict[str, Any]):
    try:
        return factory(**kwargs)
    except TypeError as exc:
        raise ConfigError(name, f"unexpected or missing keys ({exc})") from exc
    except ValueError as exc:
        raise ConfigError(name, str(exc)) from exc


def parse_scenario(doc: Dict[str, Any]) -> ScenarioConfig:
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "scenario must be a mapping")
    unknown = set(doc) - set(TOP_LEVEL_KEYS)
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown top-level key")
    for key in ("road", "agents", "av_objective"):
        if key not in doc:
            raise ConfigError(key, "missing required section")

    road = _build("road", RoadGeometry, _section(doc, "road"))

    agents_doc = doc["agents"]
    if not isinstance(agents_doc, list) or not agents_doc:
        raise ConfigError("agents", "expected a non-empty list")
    agents = []
    for i, a in enumerate(agents_doc):
        name = f"agents[{i}]"
        if not isinstance(a, dict):
            raise ConfigError(name, "expected a mapping")
        try:
            spec = AgentSpec(int(a["id"]), str(a["role"]), int(a["lane"]), float(a["x"]),
                             float(a["v"]), float(a.get("psi", 0.0)),
                             None if a.get("v_ref") is None else float(a["v_ref"]))
        except KeyError as exc:
            raise ConfigError(f"{name}.{exc.args[0]}", "missing field") from exc
        except (TypeError, ValueError) as exc:
            raise ConfigError(name, str(exc)) from exc
        if spec.role not in ROLES:
            raise ConfigError(f"{name}.role", f"must be one of {ROLES}")
        if not 0 <= spec.lane < road.lane_count:
            raise ConfigError(f"{name}.lane", "lane index outside the road")
        if spec.v < 0:
            raise ConfigError(f"{name}.v", "speed must be non-negative")
        agents.append(spec)
    ids = [a.agent_id for a in agents]
    if len(set(ids)) != len(ids):
        raise ConfigError("agents", "agent ids must be unique")
    if sum(a.role == "autonomous" for a in agents) != 1:
        raise ConfigError("agents", "exactly one autonomous agent is required")

    avo = _section(doc, "av_objective")
    try:
        target_lane = int(avo["target_lane"])
        av_x_ref = float(avo["x_ref"])
        av_v_ref = float(avo["v_ref"])
    except KeyError as exc:
        raise ConfigError(f"av_objective.{exc.args[0]}", "missing field") from exc
    if not 0 <= target_lane < road.lane_count:
        raise ConfigError("av_objective.target_lane", "lane index outside the road")
    if av_v_ref <= 0:
        raise ConfigError("av_objective.v_ref", "must be positive")

    strategy = doc.get("strategy", "adaptive")
    if strategy not in STRATEGIES:
        raise ConfigError("strategy", f"must be one of {STRATEGIES}")

    dist = _section(doc, "disturbance")
    defaults = DisturbanceModel()
    model = DisturbanceModel(
        _pair(dist.get("w_model", defaults.w_model.as_tuple()), "disturbance.w_model"),
        _pair(dist.get("w_driver", defaults.w_driver.as_tuple()), "disturbance.w_driver"))
    target = dist.get("target", "opponents")
    if target not in TARGETS:
        raise ConfigError("disturbance.target", f"must be one of {TARGETS}")

    noise = _section(doc, "noise")
    noise_box = _pair(noise.get("box", [0.1, 0.05]), "noise.box")
    seed = int(_section(doc, "seeds").get("base", 0))

    run = dict(_section(doc, "run"))
    vehicle_kw = dict(run.pop("vehicle", None) or {})
    vehicle_kw["dt"] = float(run.pop("dt", 0.5))
    vehicle = _build("run.vehicle", VehicleParams, vehicle_kw)
    actions = _build("run.actions", ActionSet, run.pop("actions", None) or {})
    wdoc = dict(run.pop("weights", None) or {})
    wkw = {}
    if "alpha" in wdoc:
        wkw["alpha"] = tuple(float(a) for a in wdoc.pop("alpha"))
    if "lambda" in wdoc:
        wkw["lam"] = float(wdoc.pop("lambda"))
    if wdoc:
        raise ConfigError("run.weights", f"unknown keys {sorted(wdoc)}")
    weights = _build("run.weights", RewardWeights, wkw)
    zones = _build("run.zones", ZoneSpec, run.pop("zones", None) or {})
    human_margin = _pair(run.pop("human_margin", None), "run.human_margin")
    horizon = int(run.pop("horizon", 2))
    policy = _build("run.horizon", LevelPolicyConfig,
                    dict(horizon=horizon, actions=actions, weights=weights, zones=zones,
                         human_margin=human_margin))

    scalars = {}
    for key, kind in (("max_steps", int), ("settle_steps", int), ("delta_p", float),
                      ("human_x_ref", float), ("x_jitter", float), ("freeze_av", bool)):
        if key in run:
            try:
                scalars[key] = kind(run.pop(key))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"run.{key}", str(exc)) from exc
    if run:
        raise ConfigError(f"run.{sorted(run)[0]}", "unknown key")
    if scalars.get("delta_p", 0.1) <= 0:
        raise ConfigError("run.delta_p", "must be positive")
    if scalars.get("max_steps", 1) < 1:
        raise ConfigError("run.max_steps", "must be at least 1")

    cfg = ScenarioConfig(road=road, agents=tuple(agents), target_lane=target_lane,
                         av_x_ref=av_x_ref, av_v_ref=av_v_ref, strategy=strategy,
                         disturbance=model, disturbance_target=target,
                         noise_enabled=bool(noise.get("enabled", False)), noise_box=noise_box,
                         seed=seed, vehicle=vehicle, policy=policy, dt=vehicle.dt,
                         horizon=horizon, **scalars)

    bound = dominance_bound(road, vehicle, horizon, actions.a_max, weights)
    if not collision_dominates(weights, bound, horizon):
        raise ConfigError("run.weights", "collision weight does not dominate the distance "
                          f"features (bound {bound:.1f} per step)")
    check_initial_overlap(cfg)
    return cfg


def check_initial_overlap(cfg: ScenarioConfig, x_offsets=None) -> None:
    agents = cfg.build_agents(x_offsets)
    z = cfg.policy.zones
    for i, a in enumerate(agents):
        for b in agents[i + 1:]:
            if rect_overlap(z.collision_rect(a.state), z.collision_rect(b.state)):
                raise ConfigError("agents", f"initial states of {a.agent_id} and "
                                  f"{b.agent_id} overlap")


def load_scenario(path: str) -> ScenarioConfig:
    if not os.path.isfile(path):
        raise ConfigError("scenario", f"no such file: {path}")
    with open(path) as fh:
        try:
            doc = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError("scenario", f"not valid YAML ({exc})") from exc
    return parse_scenario(copy.deepcopy(doc))


def default_scenario_path() -> str:
    return os.path.join(os.path.dirname(__file__), "data", "highway_lane_change.yaml")


def default_scenario() -> ScenarioConfig:
    return load_scenario(default_scenario_path())
