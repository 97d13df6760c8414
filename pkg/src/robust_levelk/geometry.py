"""Planar geometry: box disturbance sets, oriented rectangles and the road.

Disturbance sets are origin-centred axis-aligned boxes. The empty set is a
distinct value (``DisturbanceSet.empty()``) used by the nominal strategy, and
is different from the zero-width box which contains only the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

Point = Tuple[float, float]


@dataclass(frozen=True)
class DisturbanceSet:
    """Box ``[-half_width_x, half_width_x] x [-half_width_y, half_width_y]``."""

    half_width_x: float = 0.0
    half_width_y: float = 0.0
    is_empty: bool = False

    def __post_init__(self):
        if not self.is_empty and (self.half_width_x < 0 or self.half_width_y < 0):
            raise ValueError("disturbance half-widths must be non-negative")

    @classmethod
    def empty(cls) -> "DisturbanceSet":
        return cls(0.0, 0.0, is_empty=True)

    @property
    def is_degenerate(self) -> bool:
        """True for the empty set and for the zero-width box."""
        return self.is_empty or (self.half_width_x == 0 and self.half_width_y == 0)

    def contains(self, other: "DisturbanceSet") -> bool:
        if other.is_empty:
            return True
        if self.is_empty:
            return False
        return (other.half_width_x <= self.half_width_x
                and other.half_width_y <= self.half_width_y)

    def as_tuple(self) -> Tuple[float, float]:
        return (self.half_width_x, self.half_width_y)


def minkowski_sum(a: DisturbanceSet, b: DisturbanceSet) -> DisturbanceSet:
    """Minkowski sum of two boxes.

    The empty set acts as an identity here (the nominal strategy treats "no
    disturbance" as the empty set), so the sum is empty only if both are.
    """
    if a.is_empty:
        return b
    if b.is_empty:
        return a
    return DisturbanceSet(a.half_width_x + b.half_width_x,
                          a.half_width_y + b.half_width_y)


def scale(s: DisturbanceSet, c: float) -> DisturbanceSet:
    """Scale a box by ``c`` in [0, 1]; ``c = 0`` gives the zero-width box."""
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"scale factor must lie in [0, 1], got {c}")
    if s.is_empty:
        return s
    return DisturbanceSet(s.half_width_x * c, s.half_width_y * c)


def vertices(s: DisturbanceSet) -> List[Point]:
    """Finite realization set: the four corners plus the origin.

    The zero-width box yields only the origin, the empty set yields nothing.
    """
    if s.is_empty:
        return []
    if s.half_width_x == 0 and s.half_width_y == 0:
        return [(0.0, 0.0)]
    wx, wy = s.half_width_x, s.half_width_y
    return [(0.0, 0.0), (wx, wy), (wx, -wy), (-wx, wy), (-wx, -wy)]


@dataclass(frozen=True)
class OrientedRect:
    cx: float
    cy: float
    half_length: float
    half_width: float
    heading: float = 0.0

    def __post_init__(self):
        if self.half_length <= 0 or self.half_width <= 0:
            raise ValueError("rectangle half dimensions must be positive")

    @property
    def center(self) -> Point:
        return (self.cx, self.cy)

    def corners(self) -> np.ndarray:
        """Corner points, counter-clockwise, shape (4, 2)."""
        c, s = math.cos(self.heading), math.sin(self.heading)
        local = np.array([[1, 1], [-1, 1], [-1, -1], [1, -1]], dtype=float)
        local *= (self.half_length, self.half_width)
        rot = np.array([[c, -s], [s, c]])
        return local @ rot.T + (self.cx, self.cy)

    def translated(self, dx: float, dy: float) -> "OrientedRect":
        return OrientedRect(self.cx + dx, self.cy + dy, self.half_length,
                            self.half_width, self.heading)

    def contains_point(self, px: float, py: float, tol: float = 1e-9) -> bool:
        c, s = math.cos(self.heading), math.sin(self.heading)
        dx, dy = px - self.cx, py - self.cy
        u = dx * c + dy * s
        v = -dx * s + dy * c
        return abs(u) <= self.half_length + tol and abs(v) <= self.half_width + tol


def overlap_arrays(ax, ay, ahl, ahw, apsi, bx, by, bhl, bhw, bpsi) -> np.ndarray:
    """Broadcast separating-axis test over arrays of rectangles.

    All arguments broadcast against each other. Rectangles are closed, so
    touching counts as overlap.
    """
    ca, sa = np.cos(apsi), np.sin(apsi)
    cb, sb = np.cos(bpsi), np.sin(bpsi)
    dx = bx - ax
    dy = by - ay
    # |u_a . u_b| etc. for the four pairwise axis products
    uu = np.abs(ca * cb + sa * sb)
    uv = np.abs(-ca * sb + sa * cb)
    vu = np.abs(-sa * cb + ca * sb)
    vv = np.abs(sa * sb + ca * cb)
    # axis u_a
    sep = np.abs(dx * ca + dy * sa) > ahl + bhl * uu + bhw * uv
    # axis v_a
    sep |= np.abs(-dx * sa + dy * ca) > ahw + bhl * vu + bhw * vv
    # axis u_b
    sep |= np.abs(dx * cb + dy * sb) > bhl + ahl * uu + ahw * vu
    # axis v_b
    sep |= np.abs(-dx * sb + dy * cb) > bhw + ahl * uv + ahw * vv
    return ~sep


def rect_overlap(a: OrientedRect, b: OrientedRect) -> bool:
    """True iff the closed rectangles intersect.

    Scalar twin of ``overlap_arrays``: same expressions in the same order, so
    both agree bit for bit.
    """
    ca, sa = math.cos(a.heading), math.sin(a.heading)
    cb, sb = math.cos(b.heading), math.sin(b.heading)
    dx = b.cx - a.cx
    dy = b.cy - a.cy
    uu = abs(ca * cb + sa * sb)
    uv = abs(-ca * sb + sa * cb)
    vu = abs(-sa * cb + ca * sb)
    vv = abs(sa * sb + ca * cb)
    ahl, ahw, bhl, bhw = a.half_length, a.half_width, b.half_length, b.half_width
    if abs(dx * ca + dy * sa) > ahl + bhl * uu + bhw * uv:
        return False
    if abs(-dx * sa + dy * ca) > ahw + bhl * vu + bhw * vv:
        return False
    if abs(dx * cb + dy * sb) > bhl + ahl * uu + ahw * vu:
        return False
    return not abs(-dx * sb + dy * cb) > bhw + ahl * uv + ahw * vv


def inflate_dims(half_length, half_width, heading, wx, wy):
    """Half dimensions of the outer rectangle of ``rect + box``, array friendly."""
    c = np.abs(np.cos(heading))
    s = np.abs(np.sin(heading))
    return half_length + c * wx + s * wy, half_width + s * wx + c * wy


def inflate(r: OrientedRect, s: DisturbanceSet) -> OrientedRect:
    """Outer rectangle (same centre and heading) containing ``r`` plus the box ``s``."""
    if s.is_empty:
        return r
    c = abs(math.cos(r.heading))
    sn = abs(math.sin(r.heading))
    return OrientedRect(r.cx, r.cy, r.half_length + c * s.half_width_x + sn * s.half_width_y,
                        r.half_width + sn * s.half_width_x + c * s.half_width_y, r.heading)


@dataclass(frozen=True)
class RoadGeometry:
    """Straight multi-lane road along +x; lane 0 has the lowest centre y."""

    lane_count: int = 3
    lane_width: float = 4.0
    road_length: float = 200.0
    y0: float = 0.0

    def __post_init__(self):
        if self.lane_count < 1:
            raise ValueError("lane_count must be >= 1")
        if self.lane_width <= 0:
            raise ValueError("lane_width must be positive")

    def lane_center_y(self, lane_index: int) -> float:
        if not 0 <= lane_index < self.lane_count:
            raise IndexError(f"lane index {lane_index} out of range")
        return self.y0 + lane_index * self.lane_width

    @property
    def y_min(self) -> float:
        return self.y0 - 0.5 * self.lane_width

    @property
    def y_max(self) -> float:
        return self.y0 + (self.lane_count - 0.5) * self.lane_width

    def nearest_lane(self, y):
        """Index of the lane whose centre is closest to ``y`` (array friendly)."""
        idx = np.rint((np.asarray(y, dtype=float) - self.y0) / self.lane_width)
        return np.clip(idx, 0, self.lane_count - 1).astype(int)

    def nearest_lane_center(self, y):
        return self.y0 + self.nearest_lane(y) * self.lane_width

    def off_road(self, cy, half_length, half_width, heading):
        """True where a rectangle's lateral extent leaves the road (array friendly)."""
        ext = half_length * np.abs(np.sin(heading)) + half_width * np.abs(np.cos(heading))
        return (cy - ext < self.y_min) | (cy + ext > self.y_max)
