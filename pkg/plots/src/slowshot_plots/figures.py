"""Figure rendering from experiment CSVs.

Four kinds:

- ecdf:    empirical CDF of one column with the reference law overlaid
- qq:      sample quantiles against reference quantiles, 45-degree line
- decay:   the uniformity sweep profile (t vs sup deviation), log-log,
           annotated with the monotone trend computed from the data
- scatter: two columns plotted as (x, 1/y) (uniform square under the
           last value / first exceedance limit law)

Rendering never alters or reorders the input data.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from slowshot_plots.laws import parse_law

KINDS = ("ecdf", "qq", "decay", "scatter")


@dataclass(frozen=True)
class FigureSpec:
    csv_path: Path
    kind: str
    out_path: Path
    law_tag: Optional[str] = None  # required by ecdf and qq
    columns: Tuple[str, ...] = ()  # empty: first data column(s)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; have {KINDS}")
        if self.kind in ("ecdf", "qq") and not self.law_tag:
            raise ValueError(f"figure kind {self.kind!r} needs a reference law")


def read_csv_columns(path: Path) -> Dict[str, np.ndarray]:
    if not path.exists():
        raise ValueError(f"CSV not found: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"CSV is empty: {path}") from None
        rows: List[List[str]] = [row for row in reader if row]
    if not header or not rows:
        raise ValueError(f"CSV has no data rows: {path}")
    cols: Dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        cells = [row[j] for row in rows if j < len(row) and row[j] != ""]
        try:
            cols[name] = np.array([float(c) for c in cells])
        except ValueError as exc:
            raise ValueError(f"non-numeric cell in column {name!r} of {path}: {exc}") from exc
    return cols


def _pick(cols: Dict[str, np.ndarray], wanted: Tuple[str, ...], n: int) -> List[Tuple[str, np.ndarray]]:
    data_names = [k for k in cols if k != "replica"]
    if wanted:
        missing = [w for w in wanted if w not in cols]
        if missing:
            raise ValueError(f"columns {missing} not in CSV (have {list(cols)})")
        names = list(wanted)
    else:
        names = data_names[:n]
    if len(names) < n:
        raise ValueError(f"need {n} data column(s), CSV has {data_names}")
    return [(nm, cols[nm]) for nm in names[:n]]


def render(spec: FigureSpec) -> Path:
    cols = read_csv_columns(Path(spec.csv_path))
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    try:
        if spec.kind == "ecdf":
            _render_ecdf(ax, cols, spec)
        elif spec.kind == "qq":
            _render_qq(ax, cols, spec)
        elif spec.kind == "decay":
            _render_decay(ax, cols, spec)
        else:
            _render_scatter(ax, cols, spec)
        out = Path(spec.out_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.tight_layout()
        fig.savefig(out, dpi=120)
    finally:
        plt.close(fig)
    return Path(spec.out_path)


def _render_ecdf(ax, cols, spec: FigureSpec) -> None:
    law = parse_law(spec.law_tag)
    (name, values), = _pick(cols, spec.columns, 1)
    x = np.sort(values)
    y = np.arange(1, x.size + 1) / x.size
    ax.step(x, y, where="post", lw=1.0, label=f"ECDF {name} (n={x.size})")
    grid = np.linspace(x[0], x[-1], 512)
    ax.plot(grid, law.cdf(grid), "k--", lw=1.0, label=law.label)
    ax.set_xlabel(name)
    ax.set_ylabel("probability")
    ax.set_ylim(0.0, 1.0)
    ax.legend(frameon=False)


def _render_qq(ax, cols, spec: FigureSpec) -> None:
    law = parse_law(spec.law_tag)
    (name, values), = _pick(cols, spec.columns, 1)
    x = np.sort(values)
    probs = (np.arange(1, x.size + 1) - 0.5) / x.size
    q = law.quantile(probs)
    ax.plot(q, x, ".", ms=2.0, label=f"{name} (n={x.size})")
    lo, hi = min(q[0], x[0]), max(q[-1], x[-1])
    ax.plot([lo, hi], [lo, hi], "k--", lw=1.0, label="reference line")
    ax.set_xlabel(f"{law.label} quantiles")
    ax.set_ylabel("sample quantiles")
    ax.legend(frameon=False)


def _render_decay(ax, cols, spec: FigureSpec) -> None:
    if spec.columns:
        names = spec.columns
    elif "t" in cols and "sup_dev" in cols:
        names = ("t", "sup_dev")
    else:
        names = tuple(k for k in cols if k != "replica")[:2]
    picked = _pick(cols, names, 2)
    (xname, x), (yname, y) = picked
    ax.loglog(x, np.maximum(y, 1e-300), "o-", ms=3.0, lw=1.0)
    trend = "monotone decreasing" if np.all(np.diff(y) <= 0) else "not monotone"
    ax.set_title(f"{yname} vs {xname}: {trend} over the grid")
    ax.set_xlabel(xname)
    ax.set_ylabel(yname)


def _render_scatter(ax, cols, spec: FigureSpec) -> None:
    (xname, x), (yname, y) = _pick(cols, spec.columns, 2)
    if np.any(y == 0):
        raise ValueError(f"column {yname!r} contains zeros; cannot form 1/{yname}")
    ax.plot(x, 1.0 / y, ".", ms=2.0, alpha=0.5)
    ax.set_xlabel(xname)
    ax.set_ylabel(f"1/{yname}")
    ax.set_aspect("equal", adjustable="box")
