"""Dataset ingestion and JSON serialization of models, metrics and plot data.

All artifacts are JSON with a ``schema_version`` field; readers reject
unknown major versions. Floats go through Python's shortest round-trip
repr, so re-reading a file reproduces the exact binary values. Writes are
atomic (temp file + rename) and contain no timestamps, making repeated runs
byte-identical; wall-clock timing lives only in the metrics report.
"""

import csv
import json
import math
import os
import tempfile
import warnings
from dataclasses import dataclass

import numpy as np

from .density import DensityModel
from .diagnostics import MetricsReport
from .legendre import TensorIndex
from .model import DecompositionModel
from .scaling import ScalerParams

__all__ = [
    "SCHEMA_VERSION",
    "Dataset",
    "ingest_csv",
    "save_model",
    "load_model",
    "metrics_to_dict",
    "save_metrics",
    "write_json",
    "build_export_bundle",
]

SCHEMA_VERSION = "1.0"

MAIN_EFFECT_GRID_POINTS = 200
PAIR_EFFECT_GRID_POINTS = 50


@dataclass
class Dataset:
    """In-memory numeric dataset: features, response, and provenance."""

    feature_names: list
    X: np.ndarray
    y: np.ndarray
    source_path: str = ""
    n_dropped: int = 0

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]


def ingest_csv(path, target_column):
    """Load a headered CSV, splitting off the target column.

    ``target_column`` is a header name, or an integer index into the header
    (negative indices count from the end), or ``None`` to treat every column
    as a feature (``y`` is then ``None``). Rows containing missing or
    non-numeric cells are dropped with a warning carrying the count.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"input file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path} is empty") from None
        header = [h.strip() for h in header]
        target_idx = None if target_column is None else _resolve_target(header, target_column)
        rows, dropped = [], 0
        for raw in reader:
            if len(raw) != len(header):
                dropped += 1
                continue
            try:
                vals = [float(c) for c in raw]
            except ValueError:
                dropped += 1
                continue
            if any(math.isnan(v) or math.isinf(v) for v in vals):
                dropped += 1
                continue
            rows.append(vals)
    if dropped:
        warnings.warn(f"dropped {dropped} rows with missing or non-numeric cells", stacklevel=2)
    if len(rows) < 2:
        raise ValueError(f"{path}: need at least 2 usable rows, got {len(rows)}")
    data = np.asarray(rows)
    keep = [j for j in range(len(header)) if j != target_idx]
    return Dataset(
        feature_names=[header[j] for j in keep],
        X=data[:, keep],
        y=None if target_idx is None else data[:, target_idx],
        source_path=str(path),
        n_dropped=dropped,
    )


def _resolve_target(header, target_column):
    if target_column in header:
        return header.index(target_column)
    try:
        idx = int(target_column)
    except (TypeError, ValueError):
        raise ValueError(
            f"target column {target_column!r} not found among {header}"
        ) from None
    if not -len(header) <= idx < len(header):
        raise ValueError(f"target index {idx} out of range for {len(header)} columns")
    return idx % len(header)


def write_json(payload, path):
    """Serialize to JSON atomically (write to a temp file, then rename)."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _check_schema(payload, path):
    version = str(payload.get("schema_version", ""))
    major = version.split(".", 1)[0]
    if major != SCHEMA_VERSION.split(".", 1)[0]:
        raise ValueError(
            f"{path}: unsupported schema version {version!r} (expected major "
            f"{SCHEMA_VERSION.split('.', 1)[0]})"
        )


def save_model(model, path):
    """Write a fitted decomposition to a self-contained JSON document."""
    if not isinstance(model.density, DensityModel):
        raise ValueError("only models with a fitted (serializable) density can be saved")
    doc = {
        "schema_version": SCHEMA_VERSION,
        "p": model.p,
        "feature_names": list(model.feature_names),
        "scaler": None
        if model.scaler is None
        else {
            "means": list(model.scaler.means),
            "stds": list(model.scaler.stds),
        },
        "density": {
            "d_density": model.density.d_density,
            "epsilon": model.density.clip_floor,
            "subsets": [
                {"S": list(s), "coeffs_row_major": list(c.ravel())}
                for s, c in sorted(model.density.coefficients.items())
            ],
        },
        "truncation": {"K": model.K, "d": model.d},
        "support": [
            {"S": list(ix.subset), "degrees": list(ix.degrees)} for ix in model.support
        ],
        "coefficients": list(map(float, model.coefficients)),
        "offsets": [
            {"S": list(s), "value": v} for s, v in sorted(model.offsets.items())
        ],
        "nu_empty": model.nu_empty,
        "solver": None
        if model.solve_report is None
        else {
            "selected_columns": list(model.solve_report.selected_support),
            "bic_values": list(model.solve_report.bic_values),
            "rank": model.solve_report.rank,
        },
    }
    write_json(doc, path)


def load_model(path):
    """Reconstruct a decomposition model from :func:`save_model` output."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    _check_schema(doc, path)
    p = int(doc["p"])
    scaler = None
    if doc.get("scaler") is not None:
        scaler = ScalerParams(
            means=np.asarray(doc["scaler"]["means"], dtype=float),
            stds=np.asarray(doc["scaler"]["stds"], dtype=float),
        )
    dd = int(doc["density"]["d_density"])
    coefficients = {}
    for entry in doc["density"]["subsets"]:
        subset = tuple(int(j) for j in entry["S"])
        shape = (dd + 1,) * len(subset)
        coefficients[subset] = np.asarray(entry["coeffs_row_major"], dtype=float).reshape(shape)
    density = DensityModel(
        coefficients=coefficients,
        d_density=dd,
        clip_floor=float(doc["density"]["epsilon"]),
    )
    support = tuple(
        TensorIndex(subset=tuple(e["S"]), degrees=tuple(e["degrees"]), ambient_dim=p)
        for e in doc["support"]
    )
    return DecompositionModel(
        feature_names=list(doc["feature_names"]),
        scaler=scaler,
        density=density,
        K=int(doc["truncation"]["K"]),
        d=int(doc["truncation"]["d"]),
        support=support,
        coefficients=np.asarray(doc["coefficients"], dtype=float),
        offsets={tuple(e["S"]): float(e["value"]) for e in doc["offsets"]},
        nu_empty=float(doc["nu_empty"]),
    )


def metrics_to_dict(report: MetricsReport):
    return {
        "schema_version": SCHEMA_VERSION,
        "r2": report.r2,
        "max_corr": report.max_corr,
        "share_threshold": report.share_threshold,
        "cosine_table": [
            {"S": list(e.s), "T": list(e.t), "cosine": e.cosine, "degenerate": e.degenerate}
            for e in report.cosine_table
        ],
        "variance_shares": [
            {"S": list(s), "share": v} for s, v in report.variance_shares.items()
        ],
        "degenerate_variance": report.degenerate_variance,
        "fit_seconds": report.fit_seconds,
        "notes": report.notes,
    }


def save_metrics(report, path):
    write_json(metrics_to_dict(report), path)


def build_export_bundle(model, dataset, rows_cap=100, references=None):
    """Collect everything a renderer needs: grids, surfaces and attributions.

    Main-effect grids span the observed raw range of each selected feature
    (200 points); pair effects get a 50 x 50 grid. Instance attributions are
    emitted for the first ``rows_cap`` rows. ``references`` may carry
    benchmark curves keyed like the grid blocks; they are passed through
    untouched for overlay plotting.
    """
    _check_feature_match(model, dataset)
    X = dataset.X
    mins = X.min(axis=0)
    maxs = X.max(axis=0)

    main_effects = []
    pair_effects = []
    for subset in model.selected_subsets:
        if len(subset) == 1:
            j = subset[0]
            grid = np.linspace(mins[j], maxs[j], MAIN_EFFECT_GRID_POINTS)
            pts = np.tile((mins + maxs) / 2.0, (grid.size, 1))
            pts[:, j] = grid
            vals = model.component(subset, pts)
            block = {
                "feature": int(j),
                "feature_name": dataset.feature_names[j],
                "grid": list(grid),
                "values": list(vals),
            }
            if references and dataset.feature_names[j] in references:
                block["reference"] = references[dataset.feature_names[j]]
            main_effects.append(block)
        elif len(subset) == 2:
            i, j = subset
            gi = np.linspace(mins[i], maxs[i], PAIR_EFFECT_GRID_POINTS)
            gj = np.linspace(mins[j], maxs[j], PAIR_EFFECT_GRID_POINTS)
            GI, GJ = np.meshgrid(gi, gj, indexing="ij")
            pts = np.tile((mins + maxs) / 2.0, (GI.size, 1))
            pts[:, i] = GI.ravel()
            pts[:, j] = GJ.ravel()
            vals = model.component(subset, pts)
            pair_effects.append(
                {
                    "features": [int(i), int(j)],
                    "feature_names": [dataset.feature_names[i], dataset.feature_names[j]],
                    "grid_x": list(gi),
                    "grid_y": list(gj),
                    "values": [
                        list(row) for row in np.asarray(vals).reshape(GI.shape)
                    ],
                }
            )

    n_rows = min(rows_cap, dataset.n)
    y_head = dataset.y[:n_rows] if dataset.y is not None else None
    attribution = model.shapley(X[:n_rows], y_true=y_head)
    attributions = []
    for i in range(n_rows):
        entry = {
            "row": i,
            "phi": list(np.atleast_2d(attribution.phi)[i]),
            "prediction": float(np.atleast_1d(attribution.prediction)[i]),
        }
        if attribution.residual is not None:
            entry["residual"] = float(np.atleast_1d(attribution.residual)[i])
        attributions.append(entry)

    return {
        "schema_version": SCHEMA_VERSION,
        "feature_names": list(dataset.feature_names),
        "baseline": model.nu_empty,
        "main_effects": main_effects,
        "pair_effects": pair_effects,
        "attributions": attributions,
    }


def _check_feature_match(model, dataset):
    if list(model.feature_names) == list(dataset.feature_names):
        return
    missing = [f for f in model.feature_names if f not in dataset.feature_names]
    extra = [f for f in dataset.feature_names if f not in model.feature_names]
    raise ValueError(
        f"feature schema mismatch: missing from input {missing}, unexpected {extra}"
    )
