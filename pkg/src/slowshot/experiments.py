"""Named, config-driven experiment runners.

Each runner maps one limit law or path property to a reproducible
pass/fail report: it draws replicas (each replica on its own derived
random stream, so worker count never changes results), runs the
configured tests, and writes ``report.json`` plus a per-replica CSV.

Tolerance policy: exact samplers are tested at KS level p > 1e-3;
pre-asymptotic renewal quantities carry D-thresholds (default 0.03 at
tau = 1e4, 1e4 replicas) sized to the max-versus-sum error scale
log(tau)/tau plus sampling noise ~1.95/sqrt(n).  The thresholds are an
artifact policy, not a claim about convergence rates, and reports say so.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from multiprocessing import get_context
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from slowshot import extremal, renewal, stats
from slowshot.errors import NumericError
from slowshot.renewal import ShotShape
from slowshot.rng import DERIVATION_RULE, RngStream
from slowshot.slowvary import parse_sv_spec

DEFAULT_SEED = 7
DEFAULT_TAU = 1e4
DEFAULT_REPLICAS = 10**4
DEFAULT_U_GRID = (0.5, 1.0, 2.0)

#: default D-threshold for pre-asymptotic quantities at desk scale
D_PRELIMIT = 0.03
#: default D-threshold for comparisons between two exact samplers
D_EXACT_PAIR = 0.02
#: default per-test level for p-value criteria
P_LEVEL = 1e-3

TOLERANCE_NOTE = (
    "D-thresholds for pre-asymptotic quantities are an artifact calibration "
    "(max-vs-sum error scale log(tau)/tau plus sampling noise), not a rate claim."
)


# ---------------------------------------------------------------------------
# configuration and report
# ---------------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    name: str
    L_spec: str = "logpow:1"
    alpha: float = 1.0
    tau: float = DEFAULT_TAU
    u_grid: Tuple[float, ...] = DEFAULT_U_GRID
    replicas: int = DEFAULT_REPLICAS
    seed: int = DEFAULT_SEED
    tolerances: Dict[str, float] = field(default_factory=dict)
    out_dir: Optional[Path] = None
    threads: Optional[int] = None

    def __post_init__(self) -> None:
        if self.name not in RUNNERS:
            raise ValueError(
                f"unknown experiment {self.name!r}; known: {', '.join(sorted(RUNNERS))}"
            )
        if self.replicas < 100:
            raise ValueError(f"replicas must be >= 100, got {self.replicas}")
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau!r}")
        grid = tuple(float(u) for u in self.u_grid)
        if not grid or grid[0] <= 0 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError(f"u grid must be increasing and positive, got {grid}")
        self.u_grid = grid
        parse_sv_spec(self.L_spec)  # fail fast on bad L specifications

    def tol(self, key: str, default: float) -> float:
        return float(self.tolerances.get(key, default))

    def worker_count(self) -> int:
        if self.threads is not None:
            return max(1, int(self.threads))
        return max(1, os.cpu_count() or 1)

    def echo(self) -> dict:
        # thread count is excluded: it never affects results and the report
        # body must be identical across worker counts
        return {
            "name": self.name,
            "L": self.L_spec,
            "alpha": self.alpha,
            "tau": self.tau,
            "u_grid": list(self.u_grid),
            "replicas": self.replicas,
            "seed": self.seed,
            "tolerances": dict(sorted(self.tolerances.items())),
        }


@dataclass
class ExperimentReport:
    experiment: str
    config: dict
    rng: dict
    tests: List[stats.TestResult]
    summaries: Dict[str, dict]
    notes: List[str]
    demo_grade: bool
    verdict: str
    extras: dict
    csv_name: str
    timing: dict

    def body_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "config": self.config,
            "rng": self.rng,
            "tests": [t.to_dict() for t in self.tests],
            "summaries": self.summaries,
            "notes": self.notes,
            "demo_grade": self.demo_grade,
            "verdict": self.verdict,
            "extras": self.extras,
            "csv": self.csv_name,
        }

    def to_json(self) -> str:
        full = self.body_dict()
        full["timing"] = self.timing
        return json.dumps(full, indent=2)

    def body_json(self) -> str:
        return json.dumps(self.body_dict(), indent=2)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def _finish_report(
    cfg: ExperimentConfig,
    labels: Sequence[str],
    tests: List[stats.TestResult],
    columns: Dict[str, np.ndarray],
    notes: List[str],
    demo_grade: bool,
    extras: Optional[dict],
    t_start: float,
) -> ExperimentReport:
    verdict = "pass" if all(t.passed for t in tests) else "fail"
    report = ExperimentReport(
        experiment=cfg.name,
        config=cfg.echo(),
        rng={
            "seed": cfg.seed,
            "derivation": DERIVATION_RULE,
            "labels": list(labels),
            "replicas": cfg.replicas,
        },
        tests=tests,
        summaries={k: _summarize(v) for k, v in columns.items()},
        notes=[TOLERANCE_NOTE] + notes,
        demo_grade=demo_grade,
        verdict=verdict,
        extras=extras or {},
        csv_name=f"samples_{cfg.name}.csv",
        timing={"wall_clock_s": time.perf_counter() - t_start, "threads": cfg.worker_count()},
    )
    if cfg.out_dir is not None:
        _write_outputs(report, columns, cfg.out_dir)
    return report


def _summarize(v: np.ndarray) -> dict:
    v = np.asarray(v, dtype=float)
    q = np.quantile(v, [0.25, 0.5, 0.75])
    return {
        "n": int(v.size),
        "mean": float(np.mean(v)),
        "sd": float(np.std(v, ddof=1)) if v.size > 1 else 0.0,
        "min": float(np.min(v)),
        "q25": float(q[0]),
        "median": float(q[1]),
        "q75": float(q[2]),
        "max": float(np.max(v)),
    }


def _write_outputs(report: ExperimentReport, columns: Dict[str, np.ndarray], out_dir: Path) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(report.to_json() + "\n")
    names = list(columns)
    arrays = [np.asarray(columns[k]) for k in names]
    n_rows = max((a.size for a in arrays), default=0)
    lines = [",".join(["replica"] + names)]
    for i in range(n_rows):
        cells = [str(i)]
        for a in arrays:
            if i < a.size:
                x = a[i]
                cells.append(str(int(x)) if np.issubdtype(a.dtype, np.integer) else repr(float(x)))
            else:
                cells.append("")
        lines.append(",".join(cells))
    (out_dir / report.csv_name).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# replica execution: per-replica derived streams, order-stable collection
# ---------------------------------------------------------------------------

def _replica_stream(seed: int, label: str, index: int) -> RngStream:
    return RngStream(seed, (label, index))


def _rows_walk_grid(payload: dict, lo: int, hi: int) -> np.ndarray:
    L = parse_sv_spec(payload["L_spec"])
    grid = payload["u_grid"]
    tau = payload["tau"]
    rows = np.empty((hi - lo, len(grid)))
    for j, r in enumerate(range(lo, hi)):
        s = _replica_stream(payload["seed"], payload["label"], r)
        rows[j] = renewal.grid_walk(L, tau, grid, s).nu / tau
    return rows


def _rows_walk_cross(payload: dict, lo: int, hi: int) -> np.ndarray:
    """Columns: nu/tau, L(last)/tau, L(first_exceed)/tau at t = L^{<-}(tau u)."""
    L = parse_sv_spec(payload["L_spec"])
    tau = payload["tau"]
    u = payload["u_grid"][0]
    rows = np.empty((hi - lo, 3))
    for j, r in enumerate(range(lo, hi)):
        s = _replica_stream(payload["seed"], payload["label"], r)
        gw = renewal.grid_walk(L, tau, (u,), s)
        scale_last = L.eval_logx(gw.log_last)
        scale_first = L.eval_logx(gw.log_first_exceed)
        if not (math.isfinite(scale_last) and math.isfinite(scale_first)):
            raise NumericError(
                f"L({payload['L_spec']}) of a walk sum left double range at tau={tau}; "
                "this family/tau combination cannot support crossing-value statistics"
            )
        rows[j] = (gw.nu[0] / tau, scale_last / tau, scale_first / tau)
    return rows


def _rows_walk_shot(payload: dict, lo: int, hi: int) -> np.ndarray:
    L = parse_sv_spec(payload["L_spec"])
    grid = payload["u_grid"]
    tau = payload["tau"]
    shape = ShotShape(payload["alpha"], payload["form"])
    h_norm = shape.response_scalar(L.eval_logx(L.inverse_log(tau)))
    rows = np.empty((hi - lo, len(grid)))
    for j, r in enumerate(range(lo, hi)):
        s = _replica_stream(payload["seed"], payload["label"], r)
        gw = renewal.grid_walk(L, tau, grid, s, shape=shape)
        rows[j] = gw.shot / (tau * h_norm)
    return rows


def _rows_walk_shot_one(payload: dict, lo: int, hi: int) -> np.ndarray:
    """Columns: nu/tau and the h==1 shot noise scaled by tau (identical iff
    the shot sum really is the renewal count)."""
    L = parse_sv_spec(payload["L_spec"])
    tau = payload["tau"]
    grid = payload["u_grid"]
    shape = ShotShape(0.0, "one")
    rows = np.empty((hi - lo, 2))
    for j, r in enumerate(range(lo, hi)):
        s = _replica_stream(payload["seed"], payload["label"], r)
        gw = renewal.grid_walk(L, tau, grid, s, shape=shape)
        rows[j] = (gw.nu[-1] / tau, gw.shot[-1] / (tau * 1.0))
    return rows


def _rows_inv_fdd(payload: dict, lo: int, hi: int) -> np.ndarray:
    grid = payload["u_grid"]
    rows = np.empty((hi - lo, len(grid)))
    for j, r in enumerate(range(lo, hi)):
        s = _replica_stream(payload["seed"], payload["label"], r)
        rows[j] = extremal.sample_inverse_fdd(grid, s)
    return rows


def _rows_prepost(payload: dict, lo: int, hi: int) -> np.ndarray:
    levels = payload["levels"]
    rows = np.empty((hi - lo, 2 * len(levels)))
    for j, r in enumerate(range(lo, hi)):
        s = _replica_stream(payload["seed"], payload["label"], r)
        for i, u in enumerate(levels):
            pp = extremal.sample_pre_post(u, s)
            rows[j, 2 * i] = pp.pre
            rows[j, 2 * i + 1] = pp.post
    return rows


def _rows_pathscan(payload: dict, lo: int, hi: int) -> np.ndarray:
    """Pre/post oracle: scan path records above floor = u/1000 until the
    first record exceeds u."""
    u = payload["level"]
    floor = u / 1000.0
    rows = np.empty((hi - lo, 2))
    for j, r in enumerate(range(lo, hi)):
        s = _replica_stream(payload["seed"], payload["label"], r)
        times, values = extremal.record_sequence(floor, u, s)
        above = np.nonzero(values > u)[0][0]
        pre = values[above - 1] if above >= 1 else floor
        rows[j] = (pre, values[above])
    return rows


def _rows_darling(payload: dict, lo: int, hi: int) -> np.ndarray:
    L = parse_sv_spec(payload["L_spec"])
    n = payload["n_steps"]
    rows = np.empty((hi - lo, 1))
    for j, r in enumerate(range(lo, hi)):
        s = _replica_stream(payload["seed"], payload["label"], r)
        log_xi = L.inverse_log_array(1.0 / s.uniforms(n))
        log_sn = float(np.logaddexp.reduce(log_xi))
        val = L.eval_logx(log_sn)
        if not math.isfinite(val):
            raise NumericError(
                f"L({payload['L_spec']}) of S_n left double range at n={n}; "
                "this family/tau combination cannot support the sum statistic"
            )
        rows[j] = val / n
    return rows


def _rows_j1_limit(payload: dict, lo: int, hi: int) -> np.ndarray:
    """Largest jump of the inverse extremal path on [0, 1], read off the
    record sequence (records below the floor contribute O(floor) bias)."""
    floor = payload["floor"]
    rows = np.empty((hi - lo, 1))
    for j, r in enumerate(range(lo, hi)):
        s = _replica_stream(payload["seed"], payload["label"], r)
        times, values = extremal.record_sequence(floor, 1.0, s)
        gaps = np.diff(np.concatenate([[0.0], times]))
        rows[j] = float(np.max(gaps))
    return rows


def _rows_srw_tail(payload: dict, lo: int, hi: int) -> np.ndarray:
    n_steps = payload["n_steps"]
    rows = np.empty((hi - lo, 2))
    for j, r in enumerate(range(lo, hi)):
        s = _replica_stream(payload["seed"], payload["label"], r)
        ret = renewal.srw2d_returns(n_steps, s)
        rows[j] = (float(ret[0]) if ret.size else 0.0, float(ret.size))
    return rows


_TASK_FNS: Dict[str, Callable[[dict, int, int], np.ndarray]] = {
    "walk_grid": _rows_walk_grid,
    "walk_cross": _rows_walk_cross,
    "walk_shot": _rows_walk_shot,
    "walk_shot_one": _rows_walk_shot_one,
    "inv_fdd": _rows_inv_fdd,
    "prepost": _rows_prepost,
    "pathscan": _rows_pathscan,
    "darling": _rows_darling,
    "j1_limit": _rows_j1_limit,
    "srw_tail": _rows_srw_tail,
}


def _run_task(task: Tuple[str, dict, int, int]) -> np.ndarray:
    kind, payload, lo, hi = task
    return _TASK_FNS[kind](payload, lo, hi)


def _collect(kind: str, payload: dict, replicas: int, workers: int) -> np.ndarray:
    """Rows for replicas 0..replicas-1, identical for any worker count."""
    chunk = max(25, min(1000, -(-replicas // max(1, 4 * workers))))
    tasks = [
        (kind, payload, lo, min(lo + chunk, replicas)) for lo in range(0, replicas, chunk)
    ]
    if workers <= 1 or len(tasks) == 1:
        parts = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(
            max_workers=workers, mp_context=get_context("fork")
        ) as pool:
            parts = list(pool.map(_run_task, tasks))
    return np.vstack(parts)


# ---------------------------------------------------------------------------
# reference CDFs
# ---------------------------------------------------------------------------

def exp_cdf(mean: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda v: -np.expm1(-np.asarray(v, dtype=float) / mean)

def frechet_cdf(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out

def pareto_cdf(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.where(x < 1.0, 0.0, 1.0 - 1.0 / np.maximum(x, 1.0))

def uniform_cdf(x: np.ndarray) -> np.ndarray:
    return np.clip(np.asarray(x, dtype=float), 0.0, 1.0)


def _exact_check(name: str, violations: int, n: int) -> stats.TestResult:
    return stats.TestResult(
        name=name, statistic=float(violations), p_value=None, n=n,
        criterion="==0", passed=violations == 0,
    )


def _projection_tests(
    cfg: ExperimentConfig, pre: np.ndarray, lim: np.ndarray, d_max: float
) -> List[stats.TestResult]:
    names = ["e-first", "e-last", "sum", "ramp"]
    out = []
    vecs = stats.projection_vectors(pre.shape[1])
    for v, nm in zip(vecs, names):
        out.append(
            stats.ks_two_sample(
                pre @ v, lim @ v, name=f"joint-projection-{nm}",
                d_max=cfg.tol(f"joint-projection-{nm}", d_max),
            )
        )
    return out


# ---------------------------------------------------------------------------
# the ten runners
# ---------------------------------------------------------------------------

def run_darling(cfg: ExperimentConfig) -> ExperimentReport:
    t0 = time.perf_counter()
    n = int(math.ceil(cfg.tau))
    payload = {"L_spec": cfg.L_spec, "n_steps": n, "seed": cfg.seed, "label": "darling-walk"}
    rows = _collect("darling", payload, cfg.replicas, cfg.worker_count())
    col = rows[:, 0]
    tests = [
        stats.ks_one_sample(
            col, frechet_cdf, name="frechet-marginal",
            d_max=cfg.tol("frechet-marginal", D_PRELIMIT),
        )
    ]
    return _finish_report(
        cfg, ["darling-walk"], tests, {"frechet_scaled": col},
        [f"n = ceil(tau) = {n} summands per replica"], False, None, t0,
    )


def run_nu_exponential(cfg: ExperimentConfig) -> ExperimentReport:
    t0 = time.perf_counter()
    payload = {
        "L_spec": cfg.L_spec, "tau": cfg.tau, "u_grid": (1.0,),
        "seed": cfg.seed, "label": "renewal-walk",
    }
    rows = _collect("walk_shot_one", payload, cfg.replicas, cfg.worker_count())
    nu_scaled, shot_one = rows[:, 0], rows[:, 1]
    mismatches = int(np.sum(nu_scaled != shot_one))
    tests = [
        stats.ks_one_sample(
            nu_scaled, exp_cdf(1.0), name="exp1-marginal",
            d_max=cfg.tol("exp1-marginal", D_PRELIMIT),
        ),
        _exact_check("h-one-identity", mismatches, cfg.replicas),
    ]
    return _finish_report(
        cfg, ["renewal-walk"], tests,
        {"nu_scaled": nu_scaled, "shot_one_scaled": shot_one},
        ["h == 1 shot noise recomputed per replica and compared exactly to nu"],
        False, None, t0,
    )


def run_fdd_inverse(cfg: ExperimentConfig) -> ExperimentReport:
    t0 = time.perf_counter()
    grid = cfg.u_grid
    wpayload = {
        "L_spec": cfg.L_spec, "tau": cfg.tau, "u_grid": grid,
        "seed": cfg.seed, "label": "renewal-walk",
    }
    lpayload = {"u_grid": grid, "seed": cfg.seed, "label": "extremal-inverse"}
    workers = cfg.worker_count()
    pre = _collect("walk_grid", wpayload, cfg.replicas, workers)
    lim = _collect("inv_fdd", lpayload, cfg.replicas, workers)
    tests: List[stats.TestResult] = []
    for i, u in enumerate(grid):
        tests.append(
            stats.ks_one_sample(
                pre[:, i], exp_cdf(u), name=f"exp-marginal-u{u:g}",
                d_max=cfg.tol(f"exp-marginal-u{u:g}", D_PRELIMIT),
            )
        )
    bad = int(np.sum(np.diff(pre, axis=1) < 0) + np.sum(np.diff(lim, axis=1) < 0))
    tests.append(_exact_check("monotone-coordinates", bad, cfg.replicas))
    tests.extend(_projection_tests(cfg, pre, lim, D_PRELIMIT))
    cols = {f"nu_u{u:g}": pre[:, i] for i, u in enumerate(grid)}
    cols.update({f"limit_u{u:g}": lim[:, i] for i, u in enumerate(grid)})
    return _finish_report(
        cfg, ["renewal-walk", "extremal-inverse"], tests, cols, [], False, None, t0
    )


def run_shotnoise_fdd(cfg: ExperimentConfig) -> ExperimentReport:
    t0 = time.perf_counter()
    grid = cfg.u_grid
    alpha = cfg.alpha
    wpayload = {
        "L_spec": cfg.L_spec, "tau": cfg.tau, "u_grid": grid, "alpha": alpha,
        "form": "lpow", "seed": cfg.seed, "label": "renewal-walk",
    }
    lpayload = {"u_grid": grid, "seed": cfg.seed, "label": "extremal-inverse"}
    workers = cfg.worker_count()
    pre = _collect("walk_shot", wpayload, cfg.replicas, workers)
    minv = _collect("inv_fdd", lpayload, cfg.replicas, workers)
    lim = minv * np.power(np.asarray(grid), alpha)
    tests: List[stats.TestResult] = []
    for i, u in enumerate(grid):
        tests.append(
            stats.ks_one_sample(
                pre[:, i], exp_cdf(u ** (alpha + 1.0)), name=f"shot-marginal-u{u:g}",
                d_max=cfg.tol(f"shot-marginal-u{u:g}", D_PRELIMIT),
            )
        )
    tests.extend(_projection_tests(cfg, pre, lim, D_PRELIMIT))
    cols = {f"shot_u{u:g}": pre[:, i] for i, u in enumerate(grid)}
    cols.update({f"limit_u{u:g}": lim[:, i] for i, u in enumerate(grid)})
    return _finish_report(
        cfg, ["renewal-walk", "extremal-inverse"], tests, cols,
        [f"response h = L**{alpha:g}; limit columns are u**alpha * inverse-extremal"],
        False, None, t0,
    )


def run_last_overshoot(cfg: ExperimentConfig) -> ExperimentReport:
    t0 = time.perf_counter()
    wpayload = {
        "L_spec": cfg.L_spec, "tau": cfg.tau, "u_grid": (1.0,),
        "seed": cfg.seed, "label": "renewal-walk",
    }
    ppayload = {"levels": (1.0,), "seed": cfg.seed, "label": "extremal-prepost"}
    workers = cfg.worker_count()
    rows = _collect("walk_cross", wpayload, cfg.replicas, workers)
    limit = _collect("prepost", ppayload, cfg.replicas, workers)
    last_scaled, exceed_scaled = rows[:, 1], rows[:, 2]
    L = parse_sv_spec(cfg.L_spec)
    scale_point = L.eval_logx(L.inverse_log(cfg.tau)) / cfg.tau
    violations = int(np.sum((last_scaled > scale_point) | (exceed_scaled <= scale_point)))
    notes = [f"crossing level in scaled coordinates: {scale_point!r}"]
    tests = [
        stats.ks_one_sample(
            last_scaled, uniform_cdf, name="uniform-marginal",
            d_max=cfg.tol("uniform-marginal", D_PRELIMIT),
        ),
        stats.ks_one_sample(
            exceed_scaled, pareto_cdf, name="pareto-marginal",
            d_max=cfg.tol("pareto-marginal", D_PRELIMIT),
        ),
        stats.ks_two_sample(
            last_scaled, limit[:, 0], name="pre-vs-limit",
            d_max=cfg.tol("pre-vs-limit", D_PRELIMIT),
        ),
        stats.ks_two_sample(
            exceed_scaled, limit[:, 1], name="post-vs-limit",
            d_max=cfg.tol("post-vs-limit", D_PRELIMIT),
        ),
        _exact_check("crossing-order", violations, cfg.replicas),
    ]
    if cfg.replicas >= 50 * 5 * 5:
        tests.insert(
            2,
            stats.chi2_independence(
                last_scaled, exceed_scaled, k=5, name="independence-chi2",
                p_min=cfg.tol("independence-chi2", P_LEVEL),
            ),
        )
    else:
        notes.append("independence-chi2 omitted: the 5x5 grid needs >= 1250 replicas")
    cols = {
        "last_scaled": last_scaled,
        "exceed_scaled": exceed_scaled,
        "limit_pre": limit[:, 0],
        "limit_post": limit[:, 1],
    }
    extras = {"crossing_time": L.inverse(cfg.tau).to_token()}
    return _finish_report(
        cfg, ["renewal-walk", "extremal-prepost"], tests, cols, notes, False, extras, t0
    )


def run_self_similarity(cfg: ExperimentConfig) -> ExperimentReport:
    t0 = time.perf_counter()
    levels = tuple(cfg.u_grid) + (1.0,)
    payload = {"levels": levels, "seed": cfg.seed, "label": "extremal-prepost"}
    rows = _collect("prepost", payload, cfg.replicas, cfg.worker_count())
    base_pre = rows[:, -2]
    base_post = rows[:, -1]
    tests: List[stats.TestResult] = []
    spots = ((0.5, 2.0), (0.25, 4.0))
    for i, u in enumerate(cfg.u_grid):
        pre_u, post_u = rows[:, 2 * i], rows[:, 2 * i + 1]
        tests.append(
            stats.ks_two_sample(
                pre_u, u * base_pre, name=f"pre-scaling-u{u:g}",
                d_max=cfg.tol(f"pre-scaling-u{u:g}", D_EXACT_PAIR),
            )
        )
        tests.append(
            stats.ks_two_sample(
                post_u, u * base_post, name=f"post-scaling-u{u:g}",
                d_max=cfg.tol(f"post-scaling-u{u:g}", D_EXACT_PAIR),
            )
        )
        for (x1, x2) in spots:
            emp = float(np.mean((pre_u <= x1 * u) & (post_u <= x2 * u)))
            ref = extremal.joint_cdf_pre_post(x1, x2)
            err = abs(emp - ref)
            tol = cfg.tol("joint-cdf-spot", 0.01)
            tests.append(
                stats.TestResult(
                    name=f"joint-cdf-spot-u{u:g}-({x1:g},{x2:g})",
                    statistic=err, p_value=None, n=cfg.replicas,
                    criterion=f"|emp-{ref:g}|<{tol:g}", passed=err < tol,
                )
            )
    cols = {}
    for i, u in enumerate(cfg.u_grid):
        cols[f"pre_u{u:g}"] = rows[:, 2 * i]
        cols[f"post_u{u:g}"] = rows[:, 2 * i + 1]
    cols["pre_base"] = base_pre
    cols["post_base"] = base_post
    return _finish_report(
        cfg, ["extremal-prepost"], tests, cols, [], False, None, t0
    )


def run_j1_failure(cfg: ExperimentConfig) -> ExperimentReport:
    t0 = time.perf_counter()
    wpayload = {
        "L_spec": cfg.L_spec, "tau": cfg.tau, "u_grid": (1.0,),
        "seed": cfg.seed, "label": "renewal-walk",
    }
    jpayload = {"floor": 1e-3, "seed": cfg.seed, "label": "extremal-records"}
    workers = cfg.worker_count()
    walk = _collect("walk_grid", wpayload, cfg.replicas, workers)
    j_limit = _collect("j1_limit", jpayload, cfg.replicas, workers)[:, 0]
    # Every replica crosses (nu >= 1 by definition) and every increment is
    # strictly positive, so each renewal epoch bumps the scaled path by
    # exactly 1/tau: the largest jump of the pre-limit path is 1/tau.
    # (The log-scale doubles cannot keep the epochs distinct, but the
    # underlying partial sums are: unit jumps are exact, not sampled.)
    nu_at_one = walk[:, 0] * cfg.tau
    j_renewal = np.where(nu_at_one >= 1.0, 1.0 / cfg.tau, 0.0)
    bad = int(np.sum(j_renewal != 1.0 / cfg.tau))
    tests = [_exact_check("prelimit-jump-exact-1-over-tau", bad, cfg.replicas)]
    for eps in (0.1, 0.5):
        frac = float(np.mean(j_limit > eps))
        tests.append(
            stats.TestResult(
                name=f"limit-jump-exceeds-{eps:g}", statistic=frac, p_value=None,
                n=cfg.replicas, criterion=">0", passed=frac > 0.0,
            )
        )
    cols = {"j_renewal": j_renewal, "j_limit": j_limit}
    return _finish_report(
        cfg, ["renewal-walk", "extremal-records"], tests, cols,
        ["limit-path jumps measured on records above floor 1e-3 (bias O(floor))"],
        False,
        {"prelimit_jump": 1.0 / cfg.tau,
         "frac_limit_jump_gt": {"0.1": float(np.mean(j_limit > 0.1)),
                                 "0.5": float(np.mean(j_limit > 0.5))}},
        t0,
    )


def run_uniformity(cfg: ExperimentConfig) -> ExperimentReport:
    t0 = time.perf_counter()
    L = parse_sv_spec(cfg.L_spec)
    u = cfg.u_grid[-1]
    eps = u / 4.0
    shape = ShotShape(cfg.alpha, "lpow" if cfg.alpha != 0.0 else "one")
    t_grid = np.geomspace(10.0, 1e6, 13)
    y_grid = np.linspace(0.0, u - eps, 1000)
    sups = np.empty(t_grid.size)
    hratio = np.empty(t_grid.size)
    target = u ** shape.effective_alpha
    for k, t in enumerate(t_grid):
        log_tu = L.inverse_log(t * u)
        log_ty = L.inverse_log_array(t * y_grid)
        with np.errstate(divide="ignore"):
            diff = log_tu + np.log1p(-np.exp(log_ty - log_tu))
        diff[np.isneginf(log_ty)] = log_tu
        h_diff = shape.response_from_scale(L.eval_logx_array(diff))
        h_t = shape.response_scalar(L.eval_logx(L.inverse_log(t)))
        sups[k] = float(np.max(np.abs(h_diff / h_t - target)))
        log_x = L.inverse_log(t)
        h_x = shape.response_scalar(L.eval_logx(log_x))
        h_2x = shape.response_scalar(L.eval_logx(log_x + math.log(2.0)))
        hratio[k] = abs(h_2x / h_x - 1.0)
    tol_sup = cfg.tol("uniformity-sup-final", 1e-2)
    tol_hr = cfg.tol("h-slow-variation-final", 1e-2)
    tests = [
        stats.TestResult(
            name="uniformity-sup-final", statistic=float(sups[-1]), p_value=None,
            n=t_grid.size, criterion=f"<{tol_sup:g}", passed=sups[-1] < tol_sup,
        ),
        stats.TestResult(
            name="h-slow-variation-final", statistic=float(hratio[-1]), p_value=None,
            n=t_grid.size, criterion=f"<{tol_hr:g}", passed=hratio[-1] < tol_hr,
        ),
    ]
    cols = {"t": t_grid, "sup_dev": sups, "h_ratio_dev": hratio}
    return _finish_report(
        cfg, [], tests, cols,
        [f"deterministic sweep: u={u:g}, eps={eps:g}, alpha={shape.effective_alpha:g}, "
         "1000-point y-grid per t"],
        False, {"sup_profile": sups.tolist()}, t0,
    )


def run_build_l1(cfg: ExperimentConfig) -> ExperimentReport:
    t0 = time.perf_counter()
    from slowshot.slowvary import (
        EPSILON_PRESETS, QuadratureConfig, RepresentationSpec, build_from_representation,
    )
    tests: List[stats.TestResult] = []
    cols: Dict[str, np.ndarray] = {}
    grid_log = np.linspace(-5.0, 690.0, 1000)
    for preset_name in ("inv_log", "inv_log_gapped"):
        spec = RepresentationSpec(1.0, EPSILON_PRESETS[preset_name], QuadratureConfig())
        built = build_from_representation(spec)
        at_zero = built.eval_logx(float("-inf"))
        tests.append(_exact_check(f"L1-at-zero-{preset_name}", int(at_zero != 0.0), 1))
        vals = np.array([built.eval_logx(g) for g in grid_log])
        non_increasing = int(np.sum(np.diff(vals) <= 0.0))
        tests.append(
            _exact_check(f"strict-monotone-{preset_name}", non_increasing, grid_log.size)
        )
        # ratio identity: L1 / (c e^b e^{I1}) == 1 - e^{-I1}
        i1 = np.array([built.exponent_logx(g) for g in grid_log])
        scale = spec.c * math.exp(built.b)
        lhs = vals / (scale * np.exp(i1))
        rhs = -np.expm1(-i1)
        ident_err = float(np.max(np.abs(lhs - rhs)))
        tol_i = cfg.tol("ratio-identity", 1e-6)
        tests.append(
            stats.TestResult(
                name=f"ratio-identity-{preset_name}", statistic=ident_err, p_value=None,
                n=grid_log.size, criterion=f"<{tol_i:g}", passed=ident_err < tol_i,
            )
        )
        # convergence toward the represented function c * exp(int eps/u)
        i_ref = np.array([built.reference_exponent_logx(g) for g in grid_log])
        ratio = vals / (spec.c * np.exp(i_ref))
        final_err = abs(float(ratio[-1]) - 1.0)
        tol_r = cfg.tol("ratio-limit", 5e-2)
        tests.append(
            stats.TestResult(
                name=f"ratio-limit-{preset_name}", statistic=final_err, p_value=None,
                n=grid_log.size, criterion=f"<{tol_r:g}", passed=final_err < tol_r,
            )
        )
        cols[f"L1_{preset_name}"] = vals
        cols[f"ratio_{preset_name}"] = ratio
    cols["log_x"] = grid_log
    return _finish_report(
        cfg, [], tests, cols,
        ["presets: inv_log (eps1 == eps, b = 0) and inv_log_gapped "
         "(eps == 0 on (1,10], b = -0.9 exactly)"],
        False, None, t0,
    )


def run_srw2d(cfg: ExperimentConfig) -> ExperimentReport:
    t0 = time.perf_counter()
    n_tail = 1000
    payload = {"n_steps": n_tail, "seed": cfg.seed, "label": "srw2d"}
    rows = _collect("srw_tail", payload, cfg.replicas, cfg.worker_count())
    first_ret, n_ret = rows[:, 0], rows[:, 1]
    odd_firsts = int(np.sum(first_ret.astype(np.int64) % 2 == 1))
    p_hat = float(np.mean(first_ret == 0.0))
    ref = math.pi / math.log(n_tail)
    # profile walk: scaled visit counts nu(e^{t u}) / t on a u-grid
    n_profile = 10**6
    stream = RngStream(cfg.seed, ("srw2d-profile", 0))
    returns = renewal.srw2d_returns(n_profile, stream)
    odd_profile = int(np.sum(returns % 2 == 1))
    t_scale = math.log(n_profile)
    u_prof = np.linspace(0.1, 1.0, 10)
    counts = np.searchsorted(returns, np.exp(t_scale * u_prof), side="right")
    profile = counts / t_scale
    monotone_bad = int(np.sum(np.diff(profile) < 0))
    ratio = p_hat / ref
    tests = [
        _exact_check("returns-even", odd_firsts + odd_profile, cfg.replicas),
        stats.TestResult(
            name="first-return-tail-band", statistic=ratio, p_value=None,
            n=cfg.replicas, criterion="in [0.5, 2]", passed=0.5 <= ratio <= 2.0,
        ),
        _exact_check("profile-monotone", monotone_bad, u_prof.size),
    ]
    cols = {"first_return": first_ret, "n_returns": n_ret}
    return _finish_report(
        cfg, ["srw2d", "srw2d-profile"], tests, cols,
        ["demo-grade: the tail law converges logarithmically; only a factor-2 "
         f"band around pi/log({n_tail}) = {ref:.4f} is checked"],
        True,
        {"tail_p_hat": p_hat, "tail_reference": ref,
         "profile_u": u_prof.tolist(), "profile_scaled_counts": profile.tolist()},
        t0,
    )


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentInfo:
    runner: Callable[[ExperimentConfig], ExperimentReport]
    description: str
    defaults: Dict[str, object] = field(default_factory=dict)


RUNNERS: Dict[str, ExperimentInfo] = {}


def _register(name: str, runner, description: str, **defaults) -> None:
    RUNNERS[name] = ExperimentInfo(runner, description, defaults)


_register(
    "darling", run_darling,
    "L(S_n)/n for the heavy-tailed walk against the standard Frechet law exp(-1/x).",
)
_register(
    "nu-exponential", run_nu_exponential,
    "Scaled first-passage count nu(L^{<-}(tau))/tau against the standard "
    "exponential law, plus the exact h==1 shot-noise identity Y = nu.",
    u_grid=(1.0,),
)
_register(
    "fdd-inverse", run_fdd_inverse,
    "Joint law of nu(L^{<-}(tau u_i))/tau on a u-grid against the simulated "
    "inverse extremal process: exponential marginals and fixed projections.",
)
_register(
    "shotnoise-fdd", run_shotnoise_fdd,
    "Scaled renewal shot noise Y(L^{<-}(tau u_i))/(tau h(L^{<-}(tau))) against "
    "u^alpha times the inverse extremal process.",
)
_register(
    "last-overshoot", run_last_overshoot,
    "Scaled last value and first exceedance (L(S_{nu-1})/tau, L(S_nu)/tau): "
    "uniform and Pareto marginals, independence, and the exact pre/post limit sampler.",
    u_grid=(1.0,),
)
_register(
    "self-similarity", run_self_similarity,
    "Pre/post pair at level u compared with u times the pair at level 1, "
    "plus closed-form joint CDF spot checks.",
    u_grid=(3.0,),
)
_register(
    "j1-failure", run_j1_failure,
    "Largest-jump functional: exactly 1/tau on every scaled renewal path, "
    "strictly positive with positive probability for the limit paths.",
    u_grid=(1.0,),
)
_register(
    "uniformity", run_uniformity,
    "Deterministic sweep of sup_y |h(L^{<-}(tu) - L^{<-}(ty))/h(L^{<-}(t)) - u^alpha| "
    "and of the slow-variation ratio h(2x)/h(x).",
)
_register(
    "build-L1", run_build_l1,
    "Constructive regularization L1 from the representation of a slowly varying "
    "function: L1(0)=0, strict monotonicity, ratio identity and convergence.",
)
_register(
    "srw2d", run_srw2d,
    "Demo: returns to the origin of the planar simple random walk; "
    "logarithmic tail band and scaled visit-count profile.",
)


def make_config(name: str, **overrides) -> ExperimentConfig:
    """Config with per-experiment defaults applied under the global ones."""
    if name not in RUNNERS:
        raise ValueError(
            f"unknown experiment {name!r}; known: {', '.join(sorted(RUNNERS))}"
        )
    merged: Dict[str, object] = dict(RUNNERS[name].defaults)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(name=name, **merged)


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    return RUNNERS[cfg.name].runner(cfg)
