"""Thin CLI over the bundle renderer."""

import argparse
import sys

from .render import PlotSpec, load_bundle, render_force_plot, render_main_effects


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plotviz",
        description="Render a decomposition export bundle into figures.",
    )
    parser.add_argument("--bundle", required=True, help="export bundle JSON")
    parser.add_argument("--output-dir", required=True)
    parser.add_argument("--format", choices=("svg", "png"), default="svg")
    parser.add_argument("--dpi", type=int, default=150)
    parser.add_argument(
        "--features", default=None, help="comma-separated feature-name filter"
    )
    parser.add_argument(
        "--force-rows",
        default="",
        help="comma-separated rows to force-plot (default: none)",
    )
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        bundle = load_bundle(args.bundle)
        features = tuple(args.features.split(",")) if args.features else None
        spec = PlotSpec(
            output_dir=args.output_dir, fmt=args.format, dpi=args.dpi, features=features
        )
        figures = render_main_effects(bundle, spec)
        for tok in args.force_rows.split(","):
            if tok.strip():
                figures.append(render_force_plot(bundle, spec, int(tok)))
        for fig in figures:
            print(fig.path)
        return 0
    except (ValueError, KeyError, IndexError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
