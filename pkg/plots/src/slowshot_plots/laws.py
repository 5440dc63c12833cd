"""Reference laws the experiment suite emits, by CLI tag.

Tags: "exp:<mean>", "frechet", "pareto", "uniform".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Law:
    tag: str
    label: str
    cdf: Callable[[np.ndarray], np.ndarray]
    quantile: Callable[[np.ndarray], np.ndarray]


def _exp_law(mean: float) -> Law:
    if mean <= 0:
        raise ValueError(f"exponential mean must be positive, got {mean!r}")
    return Law(
        tag=f"exp:{mean:g}",
        label=f"Exponential(mean {mean:g})",
        cdf=lambda x: -np.expm1(-np.asarray(x, dtype=float) / mean),
        quantile=lambda q: -mean * np.log1p(-np.asarray(q, dtype=float)),
    )


def _frechet_cdf(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def _pareto_cdf(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.where(x < 1.0, 0.0, 1.0 - 1.0 / np.maximum(x, 1.0))


_FIXED = {
    "frechet": Law(
        "frechet", "Frechet exp(-1/x)", _frechet_cdf,
        lambda q: -1.0 / np.log(np.asarray(q, dtype=float)),
    ),
    "pareto": Law(
        "pareto", "Pareto(1)", _pareto_cdf,
        lambda q: 1.0 / (1.0 - np.asarray(q, dtype=float)),
    ),
    "uniform": Law(
        "uniform", "Uniform(0,1)",
        lambda x: np.clip(np.asarray(x, dtype=float), 0.0, 1.0),
        lambda q: np.asarray(q, dtype=float),
    ),
}


def parse_law(tag: str) -> Law:
    tag = tag.strip()
    if tag in _FIXED:
        return _FIXED[tag]
    if tag.startswith("exp:"):
        return _exp_law(float(tag.split(":", 1)[1]))
    raise ValueError(
        f"unknown law tag {tag!r}; expected exp:<mean>, frechet, pareto or uniform"
    )
