"""Command-line interface: fit, explain, benchmark, export-plotdata.

The tool is file-based on purpose: it consumes a CSV of feature values plus
black-box predictions and emits JSON artifacts, so it stays agnostic of
whatever produced the predictions. Exit codes: 0 success, 2 usage error,
1 runtime error. ``HFD_THREADS`` caps internal (BLAS) parallelism; 0 or
unset means automatic.
"""

import argparse
import os
import sys
import time

import numpy as np

from . import io as aio
from .benchmarks import BENCHMARK_CASES
from .diagnostics import compute_metrics
from .model import FitConfig, fit_decomposition

_THREAD_LIMITER = None


def _apply_thread_cap():
    global _THREAD_LIMITER
    raw = os.environ.get("HFD_THREADS", "").strip()
    if not raw:
        return
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"HFD_THREADS must be an integer, got {raw!r}") from None
    if n > 0:
        from threadpoolctl import threadpool_limits

        _THREAD_LIMITER = threadpool_limits(limits=n)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="anovex",
        description="Functional decomposition of black-box predictions from sampled data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit a decomposition from a CSV of features + predictions")
    fit.add_argument("--input", required=True, help="CSV with header row")
    fit.add_argument("--target", required=True, help="prediction column (name or index)")
    fit.add_argument("--K", type=int, default=2, help="max interaction order (default 2)")
    fit.add_argument("--d", type=int, default=10, help="max polynomial degree (default 10)")
    fit.add_argument(
        "--deg-density", type=int, default=4, help="density expansion degree (default 4)"
    )
    fit.add_argument(
        "--density-clip", type=float, default=0.01, help="density clip floor (default 0.01)"
    )
    fit.add_argument("--seed", type=int, default=0)
    fit.add_argument("--output", required=True, help="model JSON path")
    fit.add_argument(
        "--metrics",
        default=None,
        help="metrics JSON path (default: model path with .metrics.json)",
    )

    explain = sub.add_parser("explain", help="per-instance attributions from a fitted model")
    explain.add_argument("--model", required=True)
    explain.add_argument("--input", required=True)
    explain.add_argument(
        "--target", default=None, help="prediction column for residuals (optional)"
    )
    explain.add_argument(
        "--rows", default="all", help="'all', a slice 'a:b', or a comma list of row indices"
    )
    explain.add_argument("--output", required=True)

    bench = sub.add_parser("benchmark", help="emit an analytic benchmark dataset + references")
    bench.add_argument("--case", required=True, choices=sorted(BENCHMARK_CASES))
    bench.add_argument("--n", type=int, default=10000)
    bench.add_argument("--seed", type=int, default=42)
    bench.add_argument("--output-dir", required=True)

    export = sub.add_parser(
        "export-plotdata", help="grids + attributions bundle for external rendering"
    )
    export.add_argument("--model", required=True)
    export.add_argument("--input", required=True)
    export.add_argument("--target", default=None)
    export.add_argument("--rows", type=int, default=100, help="attribution row cap")
    export.add_argument(
        "--references", default=None, help="benchmark reference JSON to embed for overlays"
    )
    export.add_argument("--output", required=True)

    return parser


def _parse_rows(spec, n):
    if spec == "all":
        return list(range(n))
    if ":" in spec:
        a, _, b = spec.partition(":")
        start = int(a) if a else 0
        stop = int(b) if b else n
        return list(range(n))[start:stop]
    return [int(tok) % n for tok in spec.split(",") if tok.strip()]


def cmd_fit(args):
    dataset = aio.ingest_csv(args.input, args.target)
    config = FitConfig(
        K=args.K,
        d=args.d,
        d_density=args.deg_density,
        clip_floor=args.density_clip,
        seed=args.seed,
    )
    try:
        config.validate(dataset.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    t0 = time.perf_counter()
    model = fit_decomposition(dataset.X, dataset.y, config, feature_names=dataset.feature_names)
    fit_seconds = time.perf_counter() - t0
    report = compute_metrics(model, dataset.X, dataset.y, fit_seconds=fit_seconds)
    aio.save_model(model, args.output)
    metrics_path = args.metrics or _default_metrics_path(args.output)
    aio.save_metrics(report, metrics_path)
    print(
        f"r2={report.r2:.4f} max_corr={report.max_corr:.4g} "
        f"support={len(model.support)} fit_seconds={fit_seconds:.3f}"
    )
    print(f"model:   {args.output}")
    print(f"metrics: {metrics_path}")


def _default_metrics_path(model_path):
    stem, ext = os.path.splitext(model_path)
    return f"{stem}.metrics{ext or '.json'}"


def cmd_explain(args):
    model = aio.load_model(args.model)
    dataset = aio.ingest_csv(args.input, args.target)
    _require_schema(model, dataset.feature_names)
    X, y = dataset.X, dataset.y
    rows = _parse_rows(args.rows, X.shape[0])
    Xr = X[rows]
    yr = y[rows] if y is not None else None
    attribution = model.shapley(Xr, y_true=yr)
    comps = model.component_values(Xr)
    payload = {
        "schema_version": aio.SCHEMA_VERSION,
        "baseline": model.nu_empty,
        "feature_names": list(model.feature_names),
        "rows": [],
    }
    phi = np.atleast_2d(attribution.phi)
    pred = np.atleast_1d(attribution.prediction)
    for k, row in enumerate(rows):
        entry = {
            "row": int(row),
            "phi": list(phi[k]),
            "prediction": float(pred[k]),
            "components": [
                {"S": list(s), "value": float(v[k])} for s, v in comps.items()
            ],
        }
        if yr is not None:
            entry["target"] = float(yr[k])
            entry["residual"] = float(yr[k] - pred[k])
        payload["rows"].append(entry)
    aio.write_json(payload, args.output)
    print(f"explained {len(rows)} rows -> {args.output}")


def _require_schema(model, names):
    if list(model.feature_names) != list(names):
        missing = [f for f in model.feature_names if f not in names]
        extra = [f for f in names if f not in model.feature_names]
        raise ValueError(
            f"feature schema mismatch: missing from input {missing}, unexpected {extra}"
        )


def cmd_benchmark(args):
    case = BENCHMARK_CASES[args.case]()
    X = case.sample(args.n, args.seed)
    y = case.target(X)
    os.makedirs(args.output_dir, exist_ok=True)
    csv_path = os.path.join(args.output_dir, f"{args.case}.csv")
    _write_csv(csv_path, ["x1", "x2", "x3", "y"], np.column_stack([X, y]))

    hi = 1.0 if args.case == "fgm" else 1.0 - 1e-6
    grid = np.linspace(-hi, hi, aio.MAIN_EFFECT_GRID_POINTS)
    refs = {
        "schema_version": aio.SCHEMA_VERSION,
        "case": args.case,
        "rho": case.rho,
        "n": args.n,
        "seed": args.seed,
        "main_effects": {
            f"x{j + 1}": {
                "grid": list(grid),
                "values": list(np.atleast_1d(case.component((j,), grid[:, None]))),
            }
            for j in range(3)
        },
    }
    gi = np.linspace(-hi, hi, aio.PAIR_EFFECT_GRID_POINTS)
    GI, GJ = np.meshgrid(gi, gi, indexing="ij")
    pair_vals = case.component((0, 1), np.column_stack([GI.ravel(), GJ.ravel()]))
    refs["pair_effect"] = {
        "features": ["x1", "x2"],
        "grid_x": list(gi),
        "grid_y": list(gi),
        "values": [list(row) for row in np.asarray(pair_vals).reshape(GI.shape)],
    }
    ref_path = os.path.join(args.output_dir, f"{args.case}_reference.json")
    aio.write_json(refs, ref_path)
    print(f"wrote {csv_path} ({args.n} rows) and {ref_path}")


def _write_csv(path, header, rows):
    import csv as _csv

    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = _csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) for v in row])


def cmd_export_plotdata(args):
    model = aio.load_model(args.model)
    dataset = aio.ingest_csv(args.input, args.target if args.target is not None else -1)
    _require_schema(model, dataset.feature_names)
    references = None
    if args.references:
        import json

        with open(args.references, encoding="utf-8") as fh:
            ref_doc = json.load(fh)
        references = ref_doc.get("main_effects", {})
    bundle = aio.build_export_bundle(
        model, dataset, rows_cap=args.rows, references=references
    )
    aio.write_json(bundle, args.output)
    print(
        f"exported {len(bundle['main_effects'])} main-effect grids, "
        f"{len(bundle['pair_effects'])} pair grids, "
        f"{len(bundle['attributions'])} attributions -> {args.output}"
    )


class UsageError(Exception):
    pass


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_thread_cap()
        if args.command == "fit":
            cmd_fit(args)
        elif args.command == "explain":
            cmd_explain(args)
        elif args.command == "benchmark":
            cmd_benchmark(args)
        elif args.command == "export-plotdata":
            cmd_export_plotdata(args)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
