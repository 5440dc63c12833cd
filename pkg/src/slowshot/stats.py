"""Empirical-distribution machinery shared by all experiments.

Asymptotic Kolmogorov-Smirnov tests (one- and two-sample) and a rank-based
chi-square independence test.  Only asymptotic p-values are computed; every
consumer draws n >= 1e4 where the asymptotic regime holds, and the
calibration tests guard against miscoding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.special import gammaincc


@dataclass(frozen=True)
class EcdfView:
    """A sample sorted ascending, with its empirical CDF."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 1:
            raise ValueError("EcdfView needs a nonempty 1-d sample")
        if np.any(np.diff(v) < 0):
            raise ValueError("EcdfView values must be sorted ascending")
        object.__setattr__(self, "values", v)

    @staticmethod
    def from_sample(sample: Sequence[float]) -> "EcdfView":
        return EcdfView(np.sort(np.asarray(sample, dtype=float)))

    @property
    def n(self) -> int:
        return int(self.values.size)

    def at(self, x: np.ndarray) -> np.ndarray:
        """Right-continuous empirical CDF evaluated at x."""
        return np.searchsorted(self.values, x, side="right") / self.n


@dataclass(frozen=True)
class TestResult:
    name: str
    statistic: float
    p_value: Optional[float]  # None where no asymptotic p applies
    n: int
    criterion: str
    passed: bool
    m: Optional[int] = None

    def __post_init__(self) -> None:
        # numpy scalars sneak in from comparisons; JSON needs plain types
        object.__setattr__(self, "statistic", float(self.statistic))
        if self.p_value is not None:
            object.__setattr__(self, "p_value", float(self.p_value))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "passed", bool(self.passed))
        if self.m is not None:
            object.__setattr__(self, "m", int(self.m))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "n": self.n,
            "m": self.m,
            "criterion": self.criterion,
            "passed": self.passed,
        }


def kolmogorov_cdf(lam: float) -> float:
    """CDF of the Kolmogorov distribution,
    Q(lam) = 1 - 2 sum_{k>=1} (-1)**(k-1) exp(-2 k**2 lam**2)."""
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam!r}")
    if lam < 0.05:
        return 0.0  # below any double-precision mass
    return 1.0 - kolmogorov_sf(lam)


def kolmogorov_sf(lam: float) -> float:
    """1 - Q(lam), summed directly so p-values near 1 keep precision."""
    if lam < 0.05:
        return 1.0
    total = 0.0
    sign = 1.0
    k = 1
    while True:
        term = math.exp(-2.0 * k * k * lam * lam)
        if term < 1e-12:
            break
        total += sign * term
        sign = -sign
        k += 1
    return min(1.0, max(0.0, 2.0 * total))


def ks_one_sample(
    sample: Sequence[float],
    cdf: Callable[[np.ndarray], np.ndarray],
    name: str = "ks-1",
    d_max: Optional[float] = None,
    p_min: Optional[float] = None,
) -> TestResult:
    """One-sample KS against a continuous CDF.

    The verdict criterion is ``D < d_max`` when d_max is given (pre-limit
    quantities), else ``p > p_min`` (exact samplers), else p > 1e-3.
    """
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.size
    if n < 10:
        raise ValueError(f"KS needs n >= 10, got {n}")
    f = np.asarray(cdf(x), dtype=float)
    if np.any(f < -1e-12) or np.any(f > 1.0 + 1e-12):
        raise ValueError("cdf returned values outside [0, 1]")
    if np.any(np.diff(f) < -1e-12):
        raise ValueError("cdf is not nondecreasing on the sample")
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    d = max(d_plus, d_minus, 0.0)
    p = kolmogorov_sf(math.sqrt(n) * d)
    return _verdict(name, d, p, n, None, d_max, p_min)


def ks_two_sample(
    a: Sequence[float],
    b: Sequence[float],
    name: str = "ks-2",
    d_max: Optional[float] = None,
    p_min: Optional[float] = None,
) -> TestResult:
    """Two-sample KS: D = sup |F_n - G_m| over the pooled sample."""
    xa = np.sort(np.asarray(a, dtype=float))
    xb = np.sort(np.asarray(b, dtype=float))
    n, m = xa.size, xb.size
    if n < 10 or m < 10:
        raise ValueError(f"KS needs sizes >= 10, got {n}, {m}")
    pooled = np.concatenate([xa, xb])
    fa = np.searchsorted(xa, pooled, side="right") / n
    fb = np.searchsorted(xb, pooled, side="right") / m
    d = float(np.max(np.abs(fa - fb)))
    en = math.sqrt(n * m / (n + m))
    p = kolmogorov_sf(en * d)
    return _verdict(name, d, p, n, m, d_max, p_min)


def _verdict(
    name: str,
    stat: float,
    p: float,
    n: int,
    m: Optional[int],
    d_max: Optional[float],
    p_min: Optional[float],
) -> TestResult:
    if d_max is not None:
        return TestResult(name, float(stat), float(p), n, f"D<{d_max:g}", stat < d_max, m)
    level = 1e-3 if p_min is None else p_min
    return TestResult(name, float(stat), float(p), n, f"p>{level:g}", p > level, m)


def _midranks(x: np.ndarray) -> np.ndarray:
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(x.size, dtype=float)
    ranks[order] = np.arange(1, x.size + 1)
    return ranks


def chi2_independence(
    x: Sequence[float],
    y: Sequence[float],
    k: int = 5,
    name: str = "chi2-indep",
    p_min: float = 1e-3,
) -> TestResult:
    """Pearson chi-square on the k x k grid of rank-transformed coordinates."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size:
        raise ValueError("coordinates must have equal length")
    n = x.size
    if n < 50 * k * k:
        raise ValueError(f"chi2 independence needs n >= 50*k^2 = {50 * k * k}, got {n}")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise ValueError("degenerate (constant) coordinate")
    ux = (_midranks(x) - 0.5) / n
    uy = (_midranks(y) - 0.5) / n
    bx = np.minimum((ux * k).astype(int), k - 1)
    by = np.minimum((uy * k).astype(int), k - 1)
    counts = np.zeros((k, k))
    np.add.at(counts, (bx, by), 1.0)
    row = counts.sum(axis=1, keepdims=True)
    col = counts.sum(axis=0, keepdims=True)
    expected = row * col / n
    stat = float(np.sum((counts - expected) ** 2 / expected))
    df = (k - 1) ** 2
    p = float(gammaincc(df / 2.0, stat / 2.0))
    return TestResult(name, stat, p, n, f"p>{p_min:g}", p > p_min)


def projection_vectors(n: int) -> List[np.ndarray]:
    """The fixed projection set used to compare joint laws coordinate-free:
    first coordinate, last coordinate, plain sum, and ramp weights."""
    first = np.zeros(n)
    first[0] = 1.0
    last = np.zeros(n)
    last[-1] = 1.0
    vecs = [first, last, np.ones(n), np.arange(1.0, n + 1.0)]
    # for a single coordinate the four collapse to two distinct projections
    out: List[np.ndarray] = []
    seen = set()
    for v in vecs:
        key = tuple(v)
        if key not in seen:
            seen.add(key)
            out.append(v)
    return out
