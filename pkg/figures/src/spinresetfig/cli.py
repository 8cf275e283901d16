"""Command-line front end: one figure per invocation.

    spinreset-figures --csv data.csv --out figure.png --kind curve
    spinreset-figures --csv map.csv --out map.png --kind heatmap

Exit codes: 0 success, 2 bad input (missing column, empty or malformed data).
"""

from __future__ import annotations

import argparse
import sys

from .plot import FigureError, PlotSpec, plot_curve, plot_heatmap

EXIT_OK = 0
EXIT_INPUT = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinreset-figures",
        description="Plot curves and heatmaps from simulation CSV outputs.",
    )
    parser.add_argument("--csv", required=True, help="input CSV file")
    parser.add_argument("--out", required=True, help="output image file")
    parser.add_argument("--kind", required=True, choices=("curve", "heatmap"))
    parser.add_argument("--manifest", default=None, help="JSON manifest (default: CSV basename + .json)")
    parser.add_argument("--title", default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    spec = PlotSpec(
        csv_path=args.csv,
        out_path=args.out,
        kind=args.kind,
        manifest_path=args.manifest,
        title=args.title,
    )
    try:
        meta = plot_curve(spec) if args.kind == "curve" else plot_heatmap(spec)
    except (FigureError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(meta["out_path"])
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
