"""Command line: ``fermidce-plot <kind> --input <csv> --output <img>``."""

from __future__ import annotations

import argparse
import sys

from .render import KIND_DEFAULTS, PlotSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fermidce-plot",
        description="Render fermidce harness CSVs as figures",
    )
    parser.add_argument("kind", choices=sorted(KIND_DEFAULTS),
                        help="figure kind / expected CSV schema")
    parser.add_argument("--input", required=True, help="input CSV path")
    parser.add_argument("--output", required=True,
                        help="output image path (extension picks the format)")
    parser.add_argument("--log-x", action=argparse.BooleanOptionalAction,
                        default=None, help="force/suppress a logarithmic x axis")
    parser.add_argument("--log-y", action=argparse.BooleanOptionalAction,
                        default=None, help="force/suppress a logarithmic y axis")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(kind=args.kind, input_path=args.input,
                    output_path=args.output, log_x=args.log_x, log_y=args.log_y)
    try:
        path = render(spec)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
