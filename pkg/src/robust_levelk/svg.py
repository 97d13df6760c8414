"""Static SVG snapshots of a simulation step.

World to image: ``px = SCALE * (x - x0)``, ``py = SCALE * (y_top - y)`` with
``SCALE = 10`` px/m. ``x0`` and ``y_top`` are chosen per image and written
into the header comment so tests can invert the mapping.
"""

from __future__ import annotations

import re
from typing import Dict, Tuple
from xml.sax.saxutils import escape

from .geometry import DisturbanceSet, OrientedRect, RoadGeometry, inflate
from .reward import ZoneSpec
from .sim import StepRecord

SCALE = 10.0
MARGIN_M = 10.0
ROLE_COLORS = {"autonomous": "#1f77b4", "level0": "#7f7f7f", "level1": "#ff7f0e"}
DASH_DOT = "8,3,2,3"

_HEADER = re.compile(r"transform: px = (\S+) \* \(x - (\S+)\), py = \S+ \* \((\S+) - y\)")


def world_to_image(x: float, y: float, x0: float, y_top: float) -> Tuple[float, float]:
    return SCALE * (x - x0), SCALE * (y_top - y)


def parse_transform(svg: str) -> Tuple[float, float, float]:
    """``(scale, x0, y_top)`` from a snapshot header."""
    m = _HEADER.search(svg)
    if m is None:
        raise ValueError("no transform header found")
    return float(m.group(1)), float(m.group(2)), float(m.group(3))


def _points(r: OrientedRect, x0: float, y_top: float) -> str:
    pts = (world_to_image(float(cx), float(cy), x0, y_top) for cx, cy in r.corners())
    return " ".join(f"{px!r},{py!r}" for px, py in pts)


def render_snapshot(rec: StepRecord, roles: Dict[int, str], road: RoadGeometry, zones: ZoneSpec,
                    sets: Dict[int, DisturbanceSet]) -> str:
    """One SVG document for ``rec``; ``sets`` gives the drawn set per opponent."""
    xs = [s.x for s in rec.states.values()]
    x0 = min(xs) - MARGIN_M
    x1 = max(xs) + MARGIN_M
    y_top = road.y_max + 1.0
    y_bot = road.y_min - 1.0
    width = SCALE * (x1 - x0)
    height = SCALE * (y_top - y_bot)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width!r}" height="{height!r}">',
        f"<!-- transform: px = {SCALE!r} * (x - {x0!r}), py = {SCALE!r} * ({y_top!r} - y) -->",
        f"<!-- time: {rec.time!r} s, step {rec.step} -->",
        f'<rect x="0" y="0" width="{width!r}" height="{height!r}" fill="#f4f4f4"/>',
    ]
    # road edges solid, lane separators dashed
    for i in range(road.lane_count + 1):
        y = road.y_min + i * road.lane_width
        _, py = world_to_image(x0, y, x0, y_top)
        dash = "" if i in (0, road.lane_count) else ' stroke-dasharray="10,10"'
        out.append(f'<line class="lane" x1="0" y1="{py!r}" x2="{width!r}" y2="{py!r}" '
                   f'stroke="#444" stroke-width="1"{dash}/>')
    for aid in sorted(rec.states):
        st = rec.states[aid]
        rect = zones.collision_rect(st)
        w = sets.get(aid)
        if w is not None and not w.is_empty:
            out.append(f'<polygon class="set" data-agent="{aid}" points="{_points(inflate(rect, w), x0, y_top)}" '
                       f'fill="none" stroke="#d62728" stroke-dasharray="{DASH_DOT}"/>')
        color = ROLE_COLORS.get(roles.get(aid, ""), "#000000")
        out.append(f'<polygon class="vehicle" data-agent="{aid}" data-role="{escape(roles.get(aid, ""))}" '
                   f'points="{_points(rect, x0, y_top)}" fill="{color}" stroke="#000"/>')
        lx, ly = world_to_image(st.x, st.y, x0, y_top)
        out.append(f'<text x="{lx!r}" y="{ly!r}" font-size="12" text-anchor="middle" '
                   f'dominant-baseline="central" fill="#fff">{aid}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
