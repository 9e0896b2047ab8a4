"""Command-line entry point: render one figure from one table.

Usage: billiard-figures <kind> <table.csv> -o <out.png>
"""

from __future__ import annotations

import argparse
import sys

from .errors import FigureError
from .render import KINDS, render

EXIT_OK = 0
EXIT_ERROR = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="billiard-figures")
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("table", help="input CSV table from the simulator")
    parser.add_argument("-o", "--out", required=True, help="output image path")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code not in (0, None) else EXIT_OK
    try:
        summary = render(args.kind, args.table, args.out)
    except FigureError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    pairs = " ".join(f"{k}={v}" for k, v in summary.items())
    print(pairs)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
