"""Discrete kinematic bicycle model.

``step_true`` is the plant (nominal step plus an additive position
disturbance), ``step_nominal`` the prediction model used inside the horizon.
``rollout_batch`` is the vectorised form used by the planners.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Sequence, Tuple

import numpy as np

from .actions import ActionPair


def wrap_angle(psi):
    """Map an angle (or array of angles) into (-pi, pi]."""
    out = np.pi - np.mod(np.pi - np.asarray(psi, dtype=float), 2 * np.pi)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class VehicleState:
    x: float
    y: float
    psi: float
    v: float

    def __post_init__(self):
        if not all(math.isfinite(f) for f in (self.x, self.y, self.psi, self.v)):
            raise ValueError(f"non-finite vehicle state {self}")
        if self.v < 0:
            raise ValueError("speed must be non-negative")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.psi, self.v])

    @classmethod
    def from_array(cls, arr) -> "VehicleState":
        return cls(float(arr[0]), float(arr[1]), float(arr[2]), float(arr[3]))


@dataclass(frozen=True)
class VehicleParams:
    l_f: float = 1.5
    l_r: float = 1.5
    dt: float = 0.5
    v_max: float = 40.0

    def __post_init__(self):
        if self.l_f <= 0 or self.l_r <= 0 or self.dt <= 0 or self.v_max <= 0:
            raise ValueError("vehicle parameters must be positive")


def slip_angle(delta_f: float, p: VehicleParams) -> float:
    if abs(delta_f) >= math.pi / 2:
        raise ValueError("steering angle magnitude must be below pi/2")
    return math.atan(p.l_r / (p.l_r + p.l_f) * math.tan(delta_f))


def step_nominal(s: VehicleState, u: ActionPair, p: VehicleParams) -> VehicleState:
    beta = slip_angle(u.delta_f, p)
    x = s.x + s.v * math.cos(s.psi + beta) * p.dt
    y = s.y + s.v * math.sin(s.psi + beta) * p.dt
    psi = wrap_angle(s.psi + s.v / p.l_r * math.sin(beta) * p.dt)
    v = min(max(s.v + u.a * p.dt, 0.0), p.v_max)
    return VehicleState(x, y, psi, v)


def step_true(s: VehicleState, u: ActionPair, p: VehicleParams,
              w: Tuple[float, float]) -> VehicleState:
    nxt = step_nominal(s, u, p)
    return replace(nxt, x=nxt.x + w[0], y=nxt.y + w[1])


def rollout(s: VehicleState, us: Sequence[ActionPair], p: VehicleParams) -> List[VehicleState]:
    if len(us) == 0:
        raise ValueError("rollout needs at least one action")
    states = [s]
    for u in us:
        states.append(step_nominal(states[-1], u, p))
    return states


def rollout_batch(state: np.ndarray, accel: np.ndarray, steer: np.ndarray,
                  p: VehicleParams) -> np.ndarray:
    """Roll many action sequences out from one state.

    Args:
        state: (4,) array ``[x, y, psi, v]``.
        accel, steer: (S, N) arrays of inputs.
        p: vehicle parameters.

    Returns:
        (S, N + 1, 4) array; index 0 along axis 1 is ``state``.
    """
    S, N = accel.shape
    out = np.empty((S, N + 1, 4))
    out[:, 0, :] = state
    # slip angles through the scalar routine: numpy's tan/arctan can differ
    # from libm in the last bit, which would split the two code paths
    uniq, inv = np.unique(steer, return_inverse=True)
    beta = np.array([slip_angle(float(d), p) for d in uniq])[inv].reshape(steer.shape)
    for j in range(N):
        x, y, psi, v = (out[:, j, k] for k in range(4))
        out[:, j + 1, 0] = x + v * np.cos(psi + beta[:, j]) * p.dt
        out[:, j + 1, 1] = y + v * np.sin(psi + beta[:, j]) * p.dt
        out[:, j + 1, 2] = wrap_angle(psi + v / p.l_r * np.sin(beta[:, j]) * p.dt)
        out[:, j + 1, 3] = np.clip(v + accel[:, j] * p.dt, 0.0, p.v_max)
    return out
