"""Exact samplers for the Poisson random measure with intensity
dt x y**-2 dy, its extremal process m, the inverse m^{<-}, and the
pre/post pair straddling a level crossing.

All samplers are exact in distribution: marks above a level u arrive as a
Poisson stream of rate 1/u in time, and a mark conditioned to exceed a
level is Pareto from that level (sampled by inversion, u/W with W
uniform).  No discretization is involved anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from slowshot.errors import NumericError

#: safety valve for the arrival scans (termination is a.s. long before this)
ARRIVAL_CAP = 10**7


@dataclass(frozen=True)
class MarkedPoint:
    """One point (t, y) of the Poisson measure."""

    t: float
    y: float

    def __post_init__(self) -> None:
        if self.t < 0 or self.y <= 0:
            raise ValueError(f"marked point needs t >= 0 and y > 0, got {self!r}")


@dataclass(frozen=True)
class StepPath:
    """Right-continuous piecewise-constant path: value ``initial`` before
    the first jump time, then ``values[i]`` on [times[i], times[i+1])."""

    initial: float
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.size != v.size:
            raise ValueError("times and values must align")
        if t.size and np.any(np.diff(t) <= 0):
            raise ValueError("jump times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def value_at(self, u: float) -> float:
        idx = int(np.searchsorted(self.times, u, side="right"))
        return self.initial if idx == 0 else float(self.values[idx - 1])


@dataclass(frozen=True)
class PrePostJump:
    """The extremal process just before and at the first crossing of a level."""

    pre: float
    post: float


def sample_inverse_fdd(u_grid: Sequence[float], stream) -> np.ndarray:
    """One exact joint draw of (m^{<-}(u_1), ..., m^{<-}(u_n)).

    Only marks above u_1 can matter; they arrive at rate 1/u_1 with Pareto
    marks from u_1, and m^{<-}(u_i) is the first arrival time whose mark
    exceeds u_i.  The scan stops at the first mark above u_n.
    """
    grid = np.asarray(u_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("u grid must be a nonempty 1-d sequence")
    if grid[0] <= 0 or np.any(np.diff(grid) <= 0):
        raise ValueError("u grid must be strictly increasing and positive")
    u1 = float(grid[0])
    out = np.empty(grid.size)
    t = 0.0
    idx = 0
    for _ in range(ARRIVAL_CAP):
        t += stream.exponential(u1)
        mark = u1 / stream.uniform()
        while idx < grid.size and mark > grid[idx]:
            out[idx] = t
            idx += 1
        if idx == grid.size:
            return out
    raise NumericError(f"arrival cap {ARRIVAL_CAP} exceeded in inverse-fdd scan")


def sample_path(horizon: float, floor: float, stream) -> StepPath:
    """Path of max(m(u), floor) on [0, horizon] as a Markov jump chain:
    from state x wait Exponential(mean x), then jump to x/W, W uniform."""
    if horizon <= 0 or floor <= 0:
        raise ValueError("horizon and floor must be positive")
    x = floor
    t = 0.0
    times = []
    values = []
    for _ in range(ARRIVAL_CAP):
        t += stream.exponential(x)
        if t > horizon:
            return StepPath(floor, np.array(times), np.array(values))
        x = x / stream.uniform()
        times.append(t)
        values.append(x)
    raise NumericError(f"arrival cap {ARRIVAL_CAP} exceeded in path sampler")


def record_sequence(floor: float, stop_level: float, stream) -> Tuple[np.ndarray, np.ndarray]:
    """Record times and values of max(m, floor), scanned from the floor up
    to and including the first record above stop_level."""
    if floor <= 0 or stop_level <= floor:
        raise ValueError("need 0 < floor < stop_level")
    x = floor
    t = 0.0
    times = []
    values = []
    for _ in range(ARRIVAL_CAP):
        t += stream.exponential(x)
        x = x / stream.uniform()
        times.append(t)
        values.append(x)
        if x > stop_level:
            return np.array(times), np.array(values)
    raise NumericError(f"arrival cap {ARRIVAL_CAP} exceeded in record scan")


def sample_pre_post(u: float, stream) -> PrePostJump:
    """Exact draw of (m(m^{<-}(u)-), m(m^{<-}(u))).

    T = m^{<-}(u) is Exponential(mean u).  Conditioned on T, the largest
    mark in [0,T) x (0,u] has P{pre <= x | T} = exp(-T(1/x - 1/u)) (void
    probability of the region [0,T] x (x,u]), inverted here via a unit
    exponential E as pre = 1/(1/u + E/T).  The crossing mark is Pareto
    from u, independent of the past: post = u/W.

    Draw order per sample: T, then E, then W.
    """
    if u <= 0:
        raise ValueError(f"level must be positive, got {u!r}")
    t = stream.exponential(u)
    e = stream.exponential(1.0)
    w = stream.uniform()
    pre = 1.0 / (1.0 / u + e / t)
    post = u / w
    return PrePostJump(pre=pre, post=post)


def joint_cdf_pre_post(x1: float, x2: float) -> float:
    """Closed-form joint CDF of (pre, post) at level u = 1:
    P{pre <= x1, post <= x2} = x1 * (1 - 1/x2) for 0 < x1 < 1 < x2."""
    if not (0.0 < x1 < 1.0):
        raise ValueError(f"x1 must lie in (0, 1), got {x1!r}")
    if not (x2 > 1.0):
        raise ValueError(f"x2 must exceed 1, got {x2!r}")
    return x1 * (1.0 - 1.0 / x2)
