"""Heavy-tailed random walks in log-domain arithmetic: increment sampling,
first passage, last value / first exceedance, and renewal shot noise.

The adopted increment model is exact rather than asymptotic:
P{xi > x} = min(1, 1/L(x)), i.e. xi = L^{<-}(1/U) with U uniform, so that
L(xi) is exactly Pareto(1).  Partial sums are kept as logs (LogNum scale)
and accumulated with the log-sum-exp recurrence; one walk serves an entire
u-grid so joint laws across grid points keep their shared randomness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from slowshot.errors import NumericError
from slowshot.lognum import LogNum
from slowshot.slowvary import SlowVaryFn

_NEG_INF = float("-inf")

DEFAULT_STEP_CAP = 10**9


@dataclass(frozen=True)
class ShotShape:
    """Response function h of the shot noise.

    form "lpow" is h = L**alpha (so h composed with L^{<-} is exactly
    y**alpha, regularly varying with index alpha); form "one" is h == 1,
    which collapses the shot noise to the renewal counting process.
    """

    alpha: float = 1.0
    form: str = "lpow"

    def __post_init__(self) -> None:
        if self.form not in ("lpow", "one"):
            raise ValueError(f"unknown shot shape form {self.form!r}")

    @property
    def effective_alpha(self) -> float:
        return 0.0 if self.form == "one" else self.alpha

    def response_from_scale(self, l_values: np.ndarray) -> np.ndarray:
        """h(x) given L(x); vectorized."""
        v = np.asarray(l_values, dtype=float)
        if self.form == "one":
            return np.ones_like(v)
        if self.alpha == 0.0:
            return np.ones_like(v)
        if self.alpha == 1.0:
            return v.copy()
        if self.alpha == -0.5:
            return 1.0 / np.sqrt(v)
        return np.power(v, self.alpha)

    def response_scalar(self, l_value: float) -> float:
        return float(self.response_from_scale(np.array([l_value]))[0])


@dataclass(frozen=True)
class RenewalCrossing:
    """The triple produced by one first-passage simulation."""

    nu: int
    last: LogNum
    first_exceed: LogNum

    def __post_init__(self) -> None:
        if self.nu < 1:
            raise ValueError(f"nu must be >= 1, got {self.nu}")
        if self.last > self.first_exceed:
            raise ValueError("last value cannot exceed the first exceedance")


def sample_increment(L: SlowVaryFn, stream) -> LogNum:
    """One inter-shot time xi = L^{<-}(1/U)."""
    return LogNum(L.inverse_log(1.0 / stream.uniform()))


def _walk_log_sums(L: SlowVaryFn, log_t_max: float, stream, step_cap: int) -> np.ndarray:
    """Log partial sums S_1, S_2, ... up to and including the first one
    exceeding log_t_max.  Draw blocks come from the stream's preferred
    block size, so scripted streams are consumed one value at a time."""
    if log_t_max == float("inf"):
        raise NumericError(
            "crossing threshold exceeds the representable log range "
            "(family/tau combination too heavy for double log scale)"
        )
    block = getattr(stream, "block_hint", 2048)
    chunks = []
    carry = _NEG_INF
    total = 0
    while True:
        if total >= step_cap:
            raise NumericError(f"walk exceeded step cap {step_cap} before crossing")
        u = stream.uniforms(block)
        log_xi = L.inverse_log_array(1.0 / u)
        cum = np.logaddexp.accumulate(log_xi)
        if carry != _NEG_INF:
            cum = np.logaddexp(cum, carry)
        chunks.append(cum)
        carry = float(cum[-1])
        total += block
        if carry > log_t_max:
            break
    s = np.concatenate(chunks) if len(chunks) > 1 else chunks[0]
    end = int(np.searchsorted(s, log_t_max, side="right"))
    return s[: end + 1]


def first_passage(
    L: SlowVaryFn, t: LogNum, stream, step_cap: int = DEFAULT_STEP_CAP
) -> RenewalCrossing:
    """Walk S_0 = 0, S_k = S_{k-1} + xi_k until S_k > t."""
    s = _walk_log_sums(L, t.log_value, stream, step_cap)
    n_below = s.size - 1
    last = LogNum(float(s[n_below - 1])) if n_below >= 1 else LogNum.zero()
    crossing = RenewalCrossing(
        nu=n_below + 1, last=last, first_exceed=LogNum(float(s[n_below]))
    )
    assert crossing.last <= t < crossing.first_exceed
    return crossing


@dataclass(frozen=True)
class GridWalkSample:
    """One walk read off against a whole grid of thresholds t_i = L^{<-}(tau u_i)."""

    nu: np.ndarray  # nu(t_i), integers
    log_last: float  # log S_{nu-1} at the largest threshold
    log_first_exceed: float  # log S_nu at the largest threshold
    shot: Optional[np.ndarray]  # raw Y(t_i) when a shape was requested


def grid_walk(
    L: SlowVaryFn,
    tau: float,
    u_grid: Sequence[float],
    stream,
    shape: Optional[ShotShape] = None,
    step_cap: int = DEFAULT_STEP_CAP,
) -> GridWalkSample:
    grid = np.asarray(u_grid, dtype=float)
    if grid.size == 0 or grid[0] <= 0 or np.any(np.diff(grid) <= 0):
        raise ValueError("u grid must be nonempty, positive, strictly increasing")
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    log_t = np.array([L.inverse_log(tau * float(u)) for u in grid])
    s = _walk_log_sums(L, float(log_t[-1]), stream, step_cap)
    counts = np.searchsorted(s, log_t, side="right")
    nu = counts + 1
    shot = None
    if shape is not None:
        shot = np.empty(grid.size)
        for i in range(grid.size):
            shot[i] = _shot_sum(L, shape, float(log_t[i]), s[: counts[i]])
    n_below = s.size - 1
    log_last = float(s[n_below - 1]) if n_below >= 1 else _NEG_INF
    return GridWalkSample(
        nu=nu, log_last=log_last, log_first_exceed=float(s[n_below]), shot=shot
    )


def _shot_sum(L: SlowVaryFn, shape: ShotShape, log_t: float, s_below: np.ndarray) -> float:
    """Y(t) = sum over renewals at or before t of h(t - S_k), including the
    S_0 = 0 term; differences are formed in log scale."""
    term0 = shape.response_scalar(L.eval_logx(log_t))
    if s_below.size == 0:
        return term0
    with np.errstate(divide="ignore"):
        log_diff = log_t + np.log1p(-np.exp(s_below - log_t))
    l_vals = L.eval_logx_array(log_diff)
    return term0 + float(np.sum(shape.response_from_scale(l_vals)))


def scaled_nu_fdd(
    L: SlowVaryFn,
    tau: float,
    u_grid: Sequence[float],
    stream,
    step_cap: int = DEFAULT_STEP_CAP,
) -> np.ndarray:
    """One joint sample of (nu(L^{<-}(tau u_1))/tau, ...) from a single walk."""
    return grid_walk(L, tau, u_grid, stream, shape=None, step_cap=step_cap).nu / tau


def shot_noise(
    L: SlowVaryFn,
    shape: ShotShape,
    t: LogNum,
    stream,
    step_cap: int = DEFAULT_STEP_CAP,
) -> float:
    """One realization of the renewal shot noise Y(t)."""
    s = _walk_log_sums(L, t.log_value, stream, step_cap)
    return _shot_sum(L, shape, t.log_value, s[:-1])


def srw2d_returns(n_steps: int, stream) -> np.ndarray:
    """Times (1-based) at which the simple symmetric walk on the planar
    integer lattice revisits the origin within n_steps steps."""
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    dx_table = np.array([1, -1, 0, 0], dtype=np.int64)
    dy_table = np.array([0, 0, 1, -1], dtype=np.int64)
    returns = []
    x = 0
    y = 0
    done = 0
    chunk = 1 << 20
    while done < n_steps:
        n = min(chunk, n_steps - done)
        d = (stream.uniforms(n) * 4.0).astype(np.int64)
        cx = x + np.cumsum(dx_table[d])
        cy = y + np.cumsum(dy_table[d])
        hit = np.nonzero((cx == 0) & (cy == 0))[0]
        if hit.size:
            returns.append(hit + done + 1)
        x = int(cx[-1])
        y = int(cy[-1])
        done += n
    if returns:
        return np.concatenate(returns)
    return np.array([], dtype=np.int64)
