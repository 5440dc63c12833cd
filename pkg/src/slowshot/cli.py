"""The ``slowshot`` command: run experiments, list them, describe one.

Exit codes: 0 when the experiment verdict is pass (or the experiment is
demo-grade), 1 when it fails or errors at runtime, 2 on usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Dict, Optional

from slowshot.experiments import (
    RUNNERS,
    ExperimentConfig,
    make_config,
    run_experiment,
)

_CONFIG_KEYS = {"experiment", "L", "alpha", "tau", "replicas", "seed", "u", "out", "threads"}


def _parse_u_list(text: str) -> tuple:
    try:
        return tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise ValueError(f"bad u grid {text!r}: {exc}") from exc


def _read_config_file(path: Path) -> Dict[str, object]:
    if not path.exists():
        raise ValueError(f"config file not found: {path}")
    out: Dict[str, object] = {}
    tolerances: Dict[str, float] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, val = (s.strip() for s in line.partition("="))
        if key.startswith("tol."):
            tolerances[key[4:]] = float(val)
        elif key in _CONFIG_KEYS:
            out[key] = val
        else:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    if tolerances:
        out["tolerances"] = tolerances
    return out


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    fileconf: Dict[str, object] = {}
    if args.config:
        fileconf = _read_config_file(Path(args.config))

    def pick(flag_value, key: str, convert):
        if flag_value is not None:
            return flag_value
        if key in fileconf:
            return convert(fileconf[key])
        return None

    name = args.experiment or fileconf.get("experiment")
    if not name:
        raise ValueError("no experiment given (use --experiment or a config file)")
    if name not in RUNNERS:
        raise ValueError(
            f"unknown experiment {name!r}; known: {', '.join(sorted(RUNNERS))}"
        )
    out = pick(args.out, "out", str)
    return make_config(
        str(name),
        L_spec=pick(args.L, "L", str),
        alpha=pick(args.alpha, "alpha", float),
        tau=pick(args.tau, "tau", float),
        u_grid=pick(args.u, "u", lambda s: _parse_u_list(str(s))),
        replicas=pick(args.replicas, "replicas", lambda s: int(float(s))),
        seed=pick(args.seed, "seed", lambda s: int(str(s), 0)),
        threads=pick(args.threads, "threads", lambda s: int(str(s))),
        out_dir=Path(out) if out else None,
        tolerances=fileconf.get("tolerances") or {},
    )


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slowshot",
        description="Monte Carlo experiments for heavy-tailed renewal limits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="run one experiment and write its artifacts")
    runp.add_argument("--experiment", help="experiment name (see 'slowshot list')")
    runp.add_argument("--tau", type=float, help="scale parameter tau")
    runp.add_argument("--replicas", type=int, help="number of Monte Carlo replicas")
    runp.add_argument("--seed", type=lambda s: int(s, 0), help="64-bit seed")
    runp.add_argument("--u", type=_parse_u_list, help="comma-separated increasing u grid")
    runp.add_argument("--alpha", type=float, help="shot response index")
    runp.add_argument("--L", help='scale function: "logpow:<beta>", "loglog", "repr:<file>"')
    runp.add_argument("--out", help="output directory for report.json and the samples CSV")
    runp.add_argument("--threads", type=int, help="replica worker processes (never affects results)")
    runp.add_argument("--config", help="key=value config file; flags take precedence")

    sub.add_parser("list", help="list experiment names")

    desc = sub.add_parser("describe", help="describe one experiment")
    desc.add_argument("name")
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = _make_parser()
    args = parser.parse_args(argv)

    if args.command == "list":
        for name in sorted(RUNNERS):
            print(name)
        return 0

    if args.command == "describe":
        if args.name not in RUNNERS:
            print(f"unknown experiment {args.name!r}", file=sys.stderr)
            return 2
        info = RUNNERS[args.name]
        print(f"{args.name}: {info.description}")
        if info.defaults:
            print(f"  defaults: {info.defaults}")
        return 0

    try:
        cfg = _build_config(args)
    except ValueError as exc:
        print(f"slowshot: {exc}", file=sys.stderr)
        return 2

    try:
        report = run_experiment(cfg)
    except Exception as exc:  # runtime failure, not usage
        print(f"slowshot: experiment failed: {exc}", file=sys.stderr)
        return 1

    for t in report.tests:
        state = "pass" if t.passed else "FAIL"
        p = "n/a" if t.p_value is None else f"{t.p_value:.6g}"
        print(f"[{state}] {t.name}: stat={t.statistic:.6g} p={p} ({t.criterion})")
    print(f"verdict: {report.verdict}" + (" (demo-grade)" if report.demo_grade else ""))
    if cfg.out_dir is not None:
        print(f"artifacts: {cfg.out_dir / 'report.json'}, {cfg.out_dir / report.csv_name}")
    if report.passed or report.demo_grade:
        return 0
    return 1


if __name__ == "__main__":
    raise SystemExit(main())
