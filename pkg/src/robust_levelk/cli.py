"""Command-line front end.

    robust-levelk run        --scenario FILE [--strategy S] [--seed N] --out DIR
    robust-levelk montecarlo --scenario FILE [--strategy S ...] [--runs N] --out DIR
    robust-levelk snapshot   --scenario FILE [--strategy S] [--seed N] --times T [T ...] --out DIR

Exit codes: 0 ok, 2 invalid scenario or arguments, 3 the run ended in a
collision. Set ``ROBUST_LEVELK_LOG`` (DEBUG, INFO, WARNING, ...) for
diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

from . import sim
from .planner import STRATEGIES
from .scenario import ConfigError, ScenarioConfig, default_scenario_path, load_scenario
from .svg import render_snapshot

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COLLISION = 3
LOG_ENV = "ROBUST_LEVELK_LOG"

TRAJECTORY_COLUMNS = ("time", "agent_id", "x", "y", "psi", "v", "action_label")
BELIEF_COLUMNS = ("time", "agent_id", "p_level0", "set_half_width_x", "set_half_width_y")
RATE_COLUMNS = ("strategy", "runs", "collision_rate", "lane_change_rate", "mean_completion_x")

log = logging.getLogger("robust_levelk.cli")


def _num(v: float) -> str:
    # repr round-trips floats exactly
    return repr(float(v))


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_bundle(out_dir: str, files: Dict[str, str]) -> None:
    """Write every file to a temporary name first, then rename into place."""
    os.makedirs(out_dir, exist_ok=True)
    staged = []
    try:
        for name, text in files.items():
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", dir=out_dir)
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(text)
            staged.append((tmp, os.path.join(out_dir, name)))
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, final in staged:
        os.replace(tmp, final)


def trajectory_rows(records: Sequence[sim.StepRecord]) -> List[list]:
    rows = []
    for r in records:
        for aid in sorted(r.states):
            s = r.states[aid]
            rows.append([_num(r.time), aid, _num(s.x), _num(s.y), _num(s.psi), _num(s.v),
                         r.actions.get(aid, "")])
    return rows


def belief_rows(records: Sequence[sim.StepRecord]) -> List[list]:
    rows = []
    for r in records:
        for aid in sorted(r.p_level0):
            wx, wy = r.set_half_widths[aid]
            rows.append([_num(r.time), aid, _num(r.p_level0[aid]), _num(wx), _num(wy)])
    return rows


def _load(scenario_path: Optional[str], strategy: Optional[str], seed: Optional[int]) -> ScenarioConfig:
    cfg = load_scenario(scenario_path or default_scenario_path())
    if strategy is not None:
        if strategy not in STRATEGIES:
            raise ConfigError("strategy", f"must be one of {STRATEGIES}")
        cfg = replace(cfg, strategy=strategy)
    if seed is not None:
        cfg = replace(cfg, seed=int(seed))
    return cfg


def cmd_run(scenario_path: Optional[str], strategy: Optional[str] = None,
            seed: Optional[int] = None, out_dir: str = ".") -> int:
    try:
        cfg = _load(scenario_path, strategy, seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    records, summary = sim.run(cfg)
    info = dict(summary.as_dict(), strategy=cfg.strategy)
    write_bundle(out_dir, {
        "trajectory.csv": _csv_text(TRAJECTORY_COLUMNS, trajectory_rows(records)),
        "belief.csv": _csv_text(BELIEF_COLUMNS, belief_rows(records)),
        "summary.json": _json_text(info),
    })
    log.info("run finished: %s", info)
    return EXIT_COLLISION if summary.collided else EXIT_OK


def cmd_montecarlo(scenario_path: Optional[str], runs: int = 100,
                   strategies: Optional[Sequence[str]] = None, out_dir: str = ".") -> int:
    try:
        cfg = _load(scenario_path, None, None)
        strategies = list(strategies or STRATEGIES)
        for s in strategies:
            if s not in STRATEGIES:
                raise ConfigError("strategy", f"must be one of {STRATEGIES}")
        if runs < 1:
            raise ConfigError("runs", "must be at least 1")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    results = [sim.monte_carlo(replace(cfg, strategy=s), runs) for s in strategies]
    rows = [[r.strategy, r.runs, _num(r.collision_rate), _num(r.lane_change_rate),
             "" if r.mean_completion_x is None else _num(r.mean_completion_x)] for r in results]
    write_bundle(out_dir, {
        "rates.csv": _csv_text(RATE_COLUMNS, rows),
        "rates.json": _json_text([{k: v for k, v in r.as_dict().items() if k != "summaries"}
                                  for r in results]),
        "runs.json": _json_text({r.strategy: [s.as_dict() for s in r.summaries] for r in results}),
    })
    for r in results:
        log.info("%s: collision %.3f lane change %.3f", r.strategy, r.collision_rate,
                 r.lane_change_rate)
    return EXIT_OK


def cmd_snapshot(scenario_path: Optional[str], times: Sequence[float], out_dir: str = ".",
                 strategy: Optional[str] = None, seed: Optional[int] = None) -> int:
    try:
        cfg = _load(scenario_path, strategy, seed)
        times = [float(t) for t in times]
        if any(t < 0 for t in times):
            raise ConfigError("times", "snapshot times must be non-negative")
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if not times:
        return EXIT_OK
    records, _ = sim.run(cfg)
    roles = {a.agent_id: a.role for a in cfg.agents}
    pcfg = cfg.planner_config()
    files = {}
    for t in times:
        k = int(round(t / cfg.dt))
        if k >= len(records):
            log.warning("time %.3f s is past the end of the run (%.3f s); drawing the final state",
                        t, records[-1].time)
            k = len(records) - 1
        rec = records[k]
        sets = {aid: pcfg.opponent_set(p) for aid, p in rec.p_level0.items()}
        files[f"snapshot_t{t:06.2f}.svg"] = render_snapshot(rec, roles, cfg.road,
                                                            cfg.policy.zones, sets)
    write_bundle(out_dir, files)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="robust-levelk",
                                description="Robust level-k lane-change simulations.")
    sub = p.add_subparsers(dest="verb", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", default=None,
                        help="scenario YAML (default: bundled highway lane change)")
    common.add_argument("--out", default=".", help="output directory")

    r = sub.add_parser("run", parents=[common], help="one simulation")
    r.add_argument("--strategy", choices=STRATEGIES)
    r.add_argument("--seed", type=int)

    m = sub.add_parser("montecarlo", parents=[common], help="batch of randomized runs")
    m.add_argument("--strategy", choices=STRATEGIES, action="append",
                   help="repeatable; default all strategies")
    m.add_argument("--runs", type=int, default=100)

    s = sub.add_parser("snapshot", parents=[common], help="SVG images at given times")
    s.add_argument("--strategy", choices=STRATEGIES)
    s.add_argument("--seed", type=int)
    s.add_argument("--times", type=float, nargs="*", default=[])
    return p


def _configure_logging() -> None:
    level = os.environ.get(LOG_ENV, "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    if args.verb == "run":
        return cmd_run(args.scenario, args.strategy, args.seed, args.out)
    if args.verb == "montecarlo":
        return cmd_montecarlo(args.scenario, args.runs, args.strategy, args.out)
    return cmd_snapshot(args.scenario, args.times, args.out, args.strategy, args.seed)


if __name__ == "__main__":
    sys.exit(main())
