"""Quality metrics of a fitted decomposition.

Three quantities matter: the reconstruction R^2 (fraction of response
variance captured), the table of empirical cosines between nested
components (how well hierarchical orthogonality survived estimation), and
MaxCorr, the worst cosine among interaction pairs whose component carries a
non-negligible variance share.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "CosineEntry",
    "MetricsReport",
    "reconstruction_r2",
    "cosine_table",
    "max_corr",
    "compute_metrics",
]

SHARE_THRESHOLD_DEFAULT = 0.01


@dataclass(frozen=True)
class CosineEntry:
    """Empirical cosine between components of subsets t < s (t may be empty)."""

    s: tuple
    t: tuple
    cosine: float
    degenerate: bool = False  # a zero second moment forced the value to 0


@dataclass
class MetricsReport:
    r2: float
    cosine_table: list
    max_corr: float
    variance_shares: dict
    fit_seconds: float = 0.0
    share_threshold: float = SHARE_THRESHOLD_DEFAULT
    degenerate_variance: bool = False  # reconstruction had zero variance
    notes: dict = field(default_factory=dict)


def reconstruction_r2(model, X_raw, y):
    """R^2 of the reconstruction against the supplied response.

    A zero-variance response is only admissible when the reconstruction is
    exact, in which case R^2 is 1 by convention.
    """
    y = np.asarray(y, dtype=float).ravel()
    if y.shape[0] < 2:
        raise ValueError("need at least 2 evaluation rows")
    pred = model.predict(X_raw)
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        if ss_res == 0.0:
            return 1.0
        raise ValueError("response has zero variance but the reconstruction is not exact")
    return 1.0 - ss_res / ss_tot


def _nested_pairs(subsets):
    for s in subsets:
        for t in subsets:
            if t != s and set(t) < set(s):
                yield s, t


def cosine_table(model, X_raw, components=None):
    """Empirical cosines for every nested pair of selected components.

    For each selected subset ``s`` the table holds one row against the empty
    set, ``mean(c_s) / sqrt(mean(c_s^2))`` (the degree of centering), plus a
    row per selected strict non-empty subset ``t``,
    ``mean(c_s c_t) / sqrt(mean(c_s^2) mean(c_t^2))``.
    """
    comps = components if components is not None else model.component_values(X_raw)
    if not comps:
        raise ValueError("model has no selected non-empty component")
    second = {s: float(np.mean(v**2)) for s, v in comps.items()}
    table = []
    for s in comps:
        if second[s] == 0.0:
            table.append(CosineEntry(s=s, t=(), cosine=0.0, degenerate=True))
        else:
            table.append(
                CosineEntry(s=s, t=(), cosine=float(np.mean(comps[s]) / np.sqrt(second[s])))
            )
    for s, t in _nested_pairs(list(comps)):
        if second[s] == 0.0 or second[t] == 0.0:
            table.append(CosineEntry(s=s, t=t, cosine=0.0, degenerate=True))
            continue
        num = float(np.mean(comps[s] * comps[t]))
        table.append(
            CosineEntry(s=s, t=t, cosine=num / np.sqrt(second[s] * second[t]))
        )
    return table


def _shares(comps, n):
    """Variance shares from precomputed component values; flags Var(pred) = 0."""
    if not comps:
        return {}, False
    total = sum(comps.values())
    denom = float(np.var(total)) if n > 0 else 0.0
    if denom == 0.0:
        return {s: 0.0 for s in comps}, True
    return {s: float(np.var(v) / denom) for s, v in comps.items()}, False


def _filtered_max(table, shares, share_threshold):
    best = 0.0
    for entry in table:
        if entry.t != () and shares.get(entry.s, 0.0) >= share_threshold:
            best = max(best, abs(entry.cosine))
    return best


def max_corr(model, X_raw, share_threshold=SHARE_THRESHOLD_DEFAULT):
    """Worst |cosine| between nested non-empty components after share filtering.

    Only pairs whose outer component carries at least ``share_threshold`` of
    the reconstruction variance count; an empty filtered set gives 0.
    Centering rows (t empty) are excluded: recentering enforces them anyway.
    """
    X_raw = np.atleast_2d(np.asarray(X_raw, dtype=float))
    comps = model.component_values(X_raw)
    if not comps:
        return 0.0
    shares, _ = _shares(comps, X_raw.shape[0])
    table = cosine_table(model, X_raw, components=comps)
    return _filtered_max(table, shares, share_threshold)


def compute_metrics(model, X_raw, y, fit_seconds=0.0, share_threshold=SHARE_THRESHOLD_DEFAULT):
    """Bundle R^2, cosines, MaxCorr and variance shares into one report."""
    X_raw = np.atleast_2d(np.asarray(X_raw, dtype=float))
    comps = model.component_values(X_raw)
    shares, degenerate = _shares(comps, X_raw.shape[0])
    table = cosine_table(model, X_raw, components=comps) if comps else []
    return MetricsReport(
        r2=reconstruction_r2(model, X_raw, y),
        cosine_table=table,
        max_corr=_filtered_max(table, shares, share_threshold),
        variance_shares=shares,
        fit_seconds=fit_seconds,
        share_threshold=share_threshold,
        degenerate_variance=degenerate,
        notes={
            "share_denominator": "variance_of_reconstruction",
        },
    )
