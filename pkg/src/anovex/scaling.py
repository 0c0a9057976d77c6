"""Feature scaling into the open cube (-1, 1)^p.

Each feature is centered and reduced (population standard deviation), then
squashed through tanh. The map is strictly monotone per feature, so it never
reorders values, and by uniqueness of the decomposition it leaves the
reported attributions invariant when curves are plotted against raw values.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["ScalerParams", "fit_scaler", "transform", "inverse_transform"]

_STD_FLOOR = 1e-12


@dataclass(frozen=True)
class ScalerParams:
    """Per-feature means and standard deviations in raw units."""

    means: np.ndarray
    stds: np.ndarray

    def __post_init__(self):
        means = np.asarray(self.means, dtype=float)
        stds = np.asarray(self.stds, dtype=float)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "stds", stds)
        if means.shape != stds.shape or means.ndim != 1:
            raise ValueError("means and stds must be 1-D vectors of equal length")
        if np.any(stds <= 0):
            raise ValueError("all stds must be positive")

    @property
    def p(self):
        return self.means.shape[0]


def fit_scaler(X):
    """Fit per-feature centering/reduction parameters on a raw matrix.

    Standard deviations use the population (1/n) convention. A feature whose
    std falls below 1e-12 gets std 1, so a constant feature maps to the
    constant 0 instead of aborting the fit.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {X.shape}")
    if X.shape[0] < 2:
        raise ValueError(f"need at least 2 rows to fit a scaler, got {X.shape[0]}")
    bad = ~np.isfinite(X)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise ValueError(f"non-finite feature value at row {i}, column {j}")
    means = X.mean(axis=0)
    stds = X.std(axis=0)
    stds = np.where(stds < _STD_FLOOR, 1.0, stds)
    return ScalerParams(means=means, stds=stds)


_OPEN_BOUND = float(np.nextafter(1.0, 0.0))


def transform(params, X):
    """Map raw features to (-1, 1) via ``tanh((x - mean) / std)`` per feature.

    Outputs are kept strictly inside the open interval even where tanh
    saturates to 1.0 in floating point.
    """
    X = np.asarray(X, dtype=float)
    one_point = X.ndim == 1
    X = np.atleast_2d(X)
    if X.shape[1] != params.p:
        raise ValueError(f"expected {params.p} features, got {X.shape[1]}")
    out = np.clip(np.tanh((X - params.means) / params.stds), -_OPEN_BOUND, _OPEN_BOUND)
    return out[0] if one_point else out


def inverse_transform(params, X_scaled):
    """Undo :func:`transform`; only defined for values strictly inside (-1, 1)."""
    X_scaled = np.asarray(X_scaled, dtype=float)
    one_point = X_scaled.ndim == 1
    X_scaled = np.atleast_2d(X_scaled)
    if X_scaled.shape[1] != params.p:
        raise ValueError(f"expected {params.p} features, got {X_scaled.shape[1]}")
    out = np.arctanh(X_scaled) * params.stds + params.means
    return out[0] if one_point else out
