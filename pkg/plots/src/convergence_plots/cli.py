"""`render` command line entry point."""

from __future__ import annotations

import argparse
import sys

from .render import PlotDataError, PlotRequest, render_convergence


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render log-log convergence figures from a sweep CSV.",
    )
    parser.add_argument("--input", required=True, help="sweep CSV path")
    parser.add_argument("--methods", required=True,
                        help="comma-separated methods, one panel each")
    parser.add_argument("--orders", default="1",
                        help="guide-line orders: one per method, or a single "
                             "order for all panels (default: %(default)s)")
    parser.add_argument("--output", required=True,
                        help="image path (.png, .svg, .pdf)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        methods = tuple(m for m in args.methods.split(",") if m)
        orders = tuple(int(o) for o in args.orders.split(",") if o)
        if not methods or not orders:
            raise PlotDataError("need at least one method and one guide order")
        request = PlotRequest(input_csv=args.input, methods=methods,
                              orders=orders, output=args.output)
        render_convergence(request)
    except (PlotDataError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
