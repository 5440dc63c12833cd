"""slowshot-plot: render one figure from an experiment samples CSV.

Example:
    slowshot-plot --in samples_nu-exponential.csv --kind ecdf --law exp:1 --out fig.png
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from slowshot_plots.figures import KINDS, FigureSpec, render


def main(argv: Optional[list] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="slowshot-plot",
        description="Render a figure from a slowshot samples CSV",
    )
    parser.add_argument("--in", dest="csv_in", required=True, help="input samples CSV")
    parser.add_argument("--kind", required=True, choices=KINDS, help="figure kind")
    parser.add_argument(
        "--law", help="reference law tag: exp:<mean>, frechet, pareto, uniform "
        "(required for ecdf and qq)"
    )
    parser.add_argument("--out", required=True, help="output image path (png, pdf, svg)")
    parser.add_argument(
        "--columns",
        help="comma-separated CSV column names (defaults to the first data columns)",
    )
    args = parser.parse_args(argv)

    columns = tuple(c.strip() for c in args.columns.split(",")) if args.columns else ()
    try:
        spec = FigureSpec(
            csv_path=Path(args.csv_in),
            kind=args.kind,
            out_path=Path(args.out),
            law_tag=args.law,
            columns=columns,
        )
        out = render(spec)
    except ValueError as exc:
        print(f"slowshot-plot: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
