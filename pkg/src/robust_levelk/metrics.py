"""Post-hoc statistics over run summaries and belief logs."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .sim import RunSummary


@dataclass(frozen=True)
class CompletionStats:
    count: int
    minimum: Optional[float]
    mean: Optional[float]
    maximum: Optional[float]


@dataclass(frozen=True)
class StrategyStats:
    runs: int
    collisions: int
    lane_changes: int
    completion: CompletionStats

    @property
    def collision_rate(self) -> float:
        return float(Fraction(self.collisions, self.runs))

    @property
    def lane_change_rate(self) -> float:
        return float(Fraction(self.lane_changes, self.runs))

    def as_dict(self) -> dict:
        c = self.completion
        return {"runs": self.runs, "collision_rate": self.collision_rate,
                "lane_change_rate": self.lane_change_rate,
                "completion_x": {"count": c.count, "min": c.minimum, "mean": c.mean,
                                 "max": c.maximum}}


@dataclass(frozen=True)
class StrategyComparison:
    per_strategy: Dict[str, StrategyStats]

    def __getitem__(self, strategy: str) -> StrategyStats:
        return self.per_strategy[strategy]

    def as_dict(self) -> dict:
        return {k: v.as_dict() for k, v in self.per_strategy.items()}


def _completion(xs: Sequence[float]) -> CompletionStats:
    if not xs:
        return CompletionStats(0, None, None, None)
    # sorted so the mean does not depend on run order
    xs = sorted(xs)
    return CompletionStats(len(xs), xs[0], sum(xs) / len(xs), xs[-1])


def compare(summaries: Mapping[str, Sequence[RunSummary]]) -> StrategyComparison:
    out = {}
    for strategy, runs in summaries.items():
        runs = list(runs)
        if not runs:
            raise ValueError(f"no runs given for strategy {strategy!r}")
        xs = [r.completion_x for r in runs if r.lane_change_completed and r.completion_x is not None]
        out[strategy] = StrategyStats(len(runs), sum(bool(r.collided) for r in runs),
                                      sum(bool(r.lane_change_completed) for r in runs),
                                      _completion(xs))
    return StrategyComparison(out)


@dataclass(frozen=True)
class BeliefSeries:
    agent_id: int
    times: Tuple[float, ...]
    p_level0: Tuple[float, ...]

    @property
    def monotone_nonincreasing(self) -> bool:
        return all(b <= a for a, b in zip(self.p_level0, self.p_level0[1:]))

    @property
    def constant(self) -> bool:
        return len(set(self.p_level0)) <= 1


class BeliefLogError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def belief_trace(belief_csv: str) -> Dict[int, BeliefSeries]:
    """Per-opponent ``(t, p_level0)`` series from a belief log.

    Expects the columns ``time, agent_id, p_level0``; extra columns are ignored.
    """
    rows: Dict[int, List[Tuple[float, float]]] = {}
    with open(belief_csv, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"time", "agent_id", "p_level0"} - set(reader.fieldnames or ())
        if missing:
            raise BeliefLogError(1, f"missing columns {sorted(missing)}")
        for row in reader:
            line = reader.line_num
            try:
                t = float(row["time"])
                aid = int(row["agent_id"])
                p = float(row["p_level0"])
            except (TypeError, ValueError):
                raise BeliefLogError(line, f"malformed row {row!r}") from None
            if not 0.0 <= p <= 1.0:
                raise BeliefLogError(line, f"probability {p} outside [0, 1]")
            rows.setdefault(aid, []).append((t, p))
    out = {}
    for aid, pts in rows.items():
        pts.sort(key=lambda tp: tp[0])
        out[aid] = BeliefSeries(aid, tuple(t for t, _ in pts), tuple(p for _, p in pts))
    return out
