"""Command line driver: render one figure id or all of them."""

from __future__ import annotations

import argparse
import sys

from .render import RenderError, render, render_all
from .specs import FIGURE_SPECS


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figures",
        description="Render simulation CSVs as labelled SVG figures.",
    )
    parser.add_argument(
        "figure_id",
        metavar="figure-id",
        help="one of: all, " + ", ".join(sorted(FIGURE_SPECS)),
    )
    parser.add_argument("--in", dest="in_dir", required=True, help="directory holding the CSVs")
    parser.add_argument("--out", dest="out_dir", required=True, help="directory for the SVGs")
    args = parser.parse_args(argv)

    try:
        if args.figure_id == "all":
            written = render_all(args.in_dir, args.out_dir)
        elif args.figure_id in FIGURE_SPECS:
            written = [render(FIGURE_SPECS[args.figure_id], args.in_dir, args.out_dir)]
        else:
            print(
                f"error: unknown figure id {args.figure_id!r}; known: all, "
                + ", ".join(sorted(FIGURE_SPECS)),
                file=sys.stderr,
            )
            return 2
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(f"wrote {path}")
    return 0


def run_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run_main()
