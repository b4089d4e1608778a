"""figplot --figure N --in <dir> --out <file.png>"""

from __future__ import annotations

import argparse
import sys

from .render import LAYOUTS, figure_spec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figplot",
        description="Render bosoncert reproduction CSVs as grouped bar charts.",
    )
    parser.add_argument("--figure", type=int, required=True, choices=sorted(LAYOUTS))
    parser.add_argument("--in", dest="indir", required=True,
                        help="directory holding the reproduction CSVs")
    parser.add_argument("--out", required=True, help="output image path (png/svg/pdf)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = figure_spec(args.figure, args.indir, args.out)
        render(spec)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
