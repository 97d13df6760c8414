import copy

import pytest
import yaml

from robust_levelk.scenario import (ConfigError, check_initial_overlap, default_scenario,
                                    default_scenario_path, load_scenario, parse_scenario)


@pytest.fixture
def doc():
    with open(default_scenario_path()) as fh:
        return yaml.safe_load(fh)


def test_default_scenario_layout():
    cfg = default_scenario()
    assert len(cfg.agents) == 4
    assert cfg.av.lane == 1 and cfg.target_lane == 2
    assert {a.role for a in cfg.agents if a.role != "autonomous"} == {"level1"}
    assert cfg.dt == 0.5 and cfg.horizon == 2
    assert cfg.planner_config().strategy == cfg.strategy


def test_round_trip_is_stable(doc):
    assert parse_scenario(copy.deepcopy(doc)) == parse_scenario(copy.deepcopy(doc))


@pytest.mark.parametrize("mutate, field", [
    (lambda d: d.pop("road"), "road"),
    (lambda d: d.update(colour="red"), "colour"),
    (lambda d: d.update(strategy="optimistic"), "strategy"),
    (lambda d: d["agents"][0].pop("x"), "agents[0].x"),
    (lambda d: d["agents"][0].update(role="robot"), "agents[0].role"),
    (lambda d: d["agents"][0].update(lane=7), "agents[0].lane"),
    (lambda d: d["av_objective"].update(target_lane=-1), "av_objective.target_lane"),
    (lambda d: d["disturbance"].update(w_model=[0.1]), "disturbance.w_model"),
    (lambda d: d["disturbance"].update(target="sky"), "disturbance.target"),
    (lambda d: d["run"].update(speed_limit=30), "run.speed_limit"),
    (lambda d: d["run"].update(horizon=5), "run.horizon"),
    (lambda d: d["run"].update(delta_p=0), "run.delta_p"),
    (lambda d: d["run"]["weights"].update(alpha=[10, 1000, 100, 1, 1, 1]), "run.weights"),
])
def test_errors_name_the_field(doc, mutate, field):
    mutate(doc)
    with pytest.raises(ConfigError) as err:
        parse_scenario(doc)
    assert err.value.field == field
    assert field in str(err.value)


def test_role_count_enforced(doc):
    for a in doc["agents"]:
        a["role"] = "level1"
    with pytest.raises(ConfigError, match="autonomous"):
        parse_scenario(doc)


def test_overlapping_initial_states(doc):
    doc["agents"][1]["lane"] = doc["agents"][0]["lane"]
    doc["agents"][1]["x"] = doc["agents"][0]["x"] + 1.0
    with pytest.raises(ConfigError) as err:
        parse_scenario(doc)
    assert err.value.field == "agents"


def test_offsets_checked_for_overlap():
    cfg = default_scenario()
    same_lane = [a for a in cfg.agents if a.lane == cfg.av.lane and a.role != "autonomous"][0]
    with pytest.raises(ConfigError):
        check_initial_overlap(cfg, {same_lane.agent_id: cfg.av.x - same_lane.x})


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ConfigError) as err:
        load_scenario(str(tmp_path / "nope.yaml"))
    assert err.value.field == "scenario"
    bad = tmp_path / "bad.yaml"
    bad.write_text("road: [1, 2\n")
    with pytest.raises(ConfigError):
        load_scenario(str(bad))
