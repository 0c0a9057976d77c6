"""Render a decomposition export bundle into figures.

The renderer is deliberately dumb: it never recomputes model math, it only
draws numbers that are physically present in the bundle JSON (axis limits
are the one derived quantity). Each render call returns a manifest of the
exact arrays handed to the plotting backend, so callers and tests can check
the drawn data verbatim against the bundle.

Outputs are one ``<feature>.<fmt>`` per main effect and ``force_<row>.<fmt>``
per requested instance. SVG output is deterministic for fixed inputs.
"""

import json
import math
import os
import warnings
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["PlotSpec", "RenderedFigure", "load_bundle", "render_main_effects", "render_force_plot"]

SUPPORTED_SCHEMA_MAJOR = "1"

POSITIVE_COLOR = "#ff0d57"
NEGATIVE_COLOR = "#1e88e5"
ESTIMATE_COLOR = "#000000"
REFERENCE_COLOR = "#888888"


@dataclass(frozen=True)
class PlotSpec:
    """Where and how to render."""

    output_dir: str
    fmt: str = "svg"
    dpi: int = 150
    features: tuple = None  # feature-name filter; None keeps everything

    def __post_init__(self):
        if self.fmt not in ("svg", "png"):
            raise ValueError(f"format must be 'svg' or 'png', got {self.fmt!r}")


@dataclass
class RenderedFigure:
    """One written file plus the verbatim numbers that were drawn into it."""

    path: str
    drawn: dict = field(default_factory=dict)


def load_bundle(path):
    with open(path, encoding="utf-8") as fh:
        bundle = json.load(fh)
    version = str(bundle.get("schema_version", ""))
    if version.split(".", 1)[0] != SUPPORTED_SCHEMA_MAJOR:
        raise ValueError(f"{path}: unsupported bundle schema version {version!r}")
    return bundle


def _savefig(fig, path, spec):
    os.makedirs(os.path.dirname(os.path.abspath(path)) or ".", exist_ok=True)
    with matplotlib.rc_context({"svg.hashsalt": "plotviz"}):
        fig.savefig(path, dpi=spec.dpi, metadata={"Date": None} if spec.fmt == "svg" else None)
    plt.close(fig)


def render_main_effects(bundle, spec):
    """One line plot per main-effect grid: component value vs raw feature.

    Reference curves shipped inside a block are overlaid as a second line.
    An empty bundle is a warning, not an error.
    """
    blocks = bundle.get("main_effects", [])
    if spec.features is not None:
        blocks = [b for b in blocks if b["feature_name"] in spec.features]
    if not blocks:
        warnings.warn("bundle contains no main-effect grids; nothing rendered", stacklevel=2)
        return []

    rendered = []
    for block in blocks:
        name = block["feature_name"]
        grid = block["grid"]
        values = block["values"]
        fig, ax = plt.subplots(figsize=(5, 3.4))
        drawn = {"grid": grid, "values": values}
        if "reference" in block:
            ax.plot(
                block["reference"]["grid"],
                block["reference"]["values"],
                color=REFERENCE_COLOR,
                linestyle="--",
                linewidth=1.2,
                label="reference",
            )
            drawn["reference_grid"] = block["reference"]["grid"]
            drawn["reference_values"] = block["reference"]["values"]
        ax.plot(grid, values, color=ESTIMATE_COLOR, linewidth=1.6, label="estimate")
        peak = max(abs(v) for v in values)
        ax.set_xlabel(name)
        ax.set_ylabel("component value")
        ax.set_title(f"main effect: {name} (max |value| {peak:.2g})")
        ax.axhline(0.0, color="#cccccc", linewidth=0.8, zorder=0)
        ax.legend(loc="best", fontsize=8)
        fig.tight_layout()
        path = os.path.join(spec.output_dir, f"{name}.{spec.fmt}")
        _savefig(fig, path, spec)
        rendered.append(RenderedFigure(path=path, drawn=drawn))
    return rendered


def render_force_plot(bundle, spec, row):
    """Horizontal force plot of one instance's attributions.

    Positive contributions stack to the right of the baseline, negative ones
    to the left, the residual (when present) is a hatched segment, and the
    baseline is marked. The bundle's efficiency identity (contributions sum
    to prediction minus baseline) is asserted before anything is drawn.
    """
    attributions = bundle.get("attributions", [])
    entry = next((e for e in attributions if e["row"] == row), None)
    if entry is None:
        raise IndexError(f"no attribution for row {row} in bundle")

    names = bundle["feature_names"]
    baseline = bundle["baseline"]
    phi = entry["phi"]
    prediction = entry["prediction"]
    if not math.isclose(sum(phi), prediction - baseline, rel_tol=0, abs_tol=1e-9):
        raise ValueError(
            f"bundle violates efficiency at row {row}: "
            f"sum(phi)={sum(phi)!r} vs prediction-baseline={prediction - baseline!r}"
        )

    fig, ax = plt.subplots(figsize=(6, 2.8))
    pos_cursor = baseline
    neg_cursor = baseline
    for name, value in zip(names, phi):
        if value >= 0:
            ax.barh(0, value, left=pos_cursor, color=POSITIVE_COLOR, edgecolor="white")
            mid = pos_cursor + value / 2
            pos_cursor += value
        else:
            neg_cursor += value
            ax.barh(0, -value, left=neg_cursor, color=NEGATIVE_COLOR, edgecolor="white")
            mid = neg_cursor - value / 2
        if abs(value) > 1e-12:
            ax.annotate(name, (mid, 0.45), ha="center", fontsize=7, rotation=45)

    drawn = {"phi": phi, "baseline": baseline, "prediction": prediction}
    if "residual" in entry:
        residual = entry["residual"]
        drawn["residual"] = residual
        start = pos_cursor if residual >= 0 else neg_cursor + residual
        ax.barh(
            0,
            abs(residual),
            left=start,
            color="#bbbbbb",
            hatch="//",
            edgecolor="white",
            label="residual",
        )
    ax.axvline(baseline, color="#333333", linewidth=1.0, linestyle=":")
    ax.annotate("baseline", (baseline, -0.55), ha="center", fontsize=8)
    ax.axvline(prediction, color=ESTIMATE_COLOR, linewidth=1.0)
    ax.annotate("prediction", (prediction, 0.62), ha="center", fontsize=8)
    ax.set_yticks([])
    ax.set_ylim(-0.9, 0.9)
    ax.set_title(f"contributions, row {row}")
    if "residual" in entry:
        ax.legend(loc="lower right", fontsize=7)
    fig.tight_layout()
    path = os.path.join(spec.output_dir, f"force_{row}.{spec.fmt}")
    _savefig(fig, path, spec)
    return RenderedFigure(path=path, drawn=drawn)
