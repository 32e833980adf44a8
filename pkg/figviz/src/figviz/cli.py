"""figviz <kind> --in <paths...> --out <image> [--omega0 "x,y;x,y;..."]"""

from __future__ import annotations

import argparse
import sys

from .readers import SchemaError
from .render import render_domain_and_control, render_pchip_kink, render_trace_compare

KINDS = ("trace_compare", "domain_and_control", "pchip_kink")
DEFAULT_OMEGA0 = ((-1.0, 0.0), (0.5, 0.75), (0.5, -1.5))


def _parse_omega0(text):
    pts = []
    for chunk in text.split(";"):
        x, y = (float(v) for v in chunk.split(","))
        pts.append((x, y))
    return tuple(pts)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="figviz",
                                     description="Render figures from exported run files")
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--omega0", default=None,
                        help='target polygon vertices as "x,y;x,y;..."')
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        if args.kind == "trace_compare":
            render_trace_compare(args.inputs, args.out)
        elif args.kind == "domain_and_control":
            omega0 = _parse_omega0(args.omega0) if args.omega0 else DEFAULT_OMEGA0
            render_domain_and_control(args.inputs, args.out, omega0=omega0)
        else:
            render_pchip_kink(args.inputs, args.out)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
