"""Adaptive robust level-k decision making for highway lane changes."""

from .actions import ACTION_LABELS, ActionPair, ActionSet, action_distance, enumerate_actions
from .belief import BeliefState, DisturbanceModel, adaptive_set, expected_reward, update_belief
from .dynamics import (VehicleParams, VehicleState, rollout, slip_angle, step_nominal,
                       step_true)
from .geometry import (DisturbanceSet, OrientedRect, RoadGeometry, inflate, minkowski_sum,
                       rect_overlap, scale, vertices)
from .levelk import (Agent, LevelPolicyConfig, TrafficState, level0_plan, level1_plan,
                     predict_opponents)
from .planner import PlannerConfig, PlanResult, plan, worst_case_reward
from .reward import (FeatureVector, ObjectiveSpec, RewardWeights, ZoneSpec, cumulative_reward,
                     features, stage_reward)
from .scenario import ConfigError, ScenarioConfig, default_scenario, load_scenario
from .sim import RunSummary, StepRecord, detect_lane_change_complete, monte_carlo, run

__version__ = "0.1.0"
