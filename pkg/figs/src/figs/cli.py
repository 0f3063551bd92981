"""``figs render <spec.json>``: render one figure spec to PNG and SVG."""

import argparse
import sys

from .render import RenderError, load_spec, render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="figs", description="render benchmark CSVs as figures"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    render_p = sub.add_parser("render", help="render a figure spec")
    render_p.add_argument("spec")
    render_p.add_argument(
        "--data", default=None,
        help="directory csv paths are resolved against (default: spec dir)",
    )
    render_p.add_argument(
        "--out", default=None,
        help="directory images are written to (default: spec dir)",
    )
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    import os

    try:
        spec = load_spec(args.spec)
        spec_dir = os.path.dirname(os.path.abspath(args.spec))
        written = render(
            spec,
            data_dir=args.data or spec_dir,
            out_dir=args.out or spec_dir,
        )
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print("wrote " + ", ".join(written))
    return 0


if __name__ == "__main__":
    sys.exit(main())
