"""Orthogonal-series estimation of low-order marginal densities.

For each requested feature subset ``S`` the marginal density on
``[-1, 1]^|S|`` is approximated by a truncated tensorized expansion in
normalized Legendre polynomials. By orthonormality of the tensor basis,
every coefficient is a plain empirical average

    c_S[m] = mean_i  prod_{j in S} Ptilde_{m_j}(X_ij),

so the whole fit reduces to array contractions. The projection estimate is
not constrained to be nonnegative; evaluation therefore floors it at a
positive clip value to keep inverse weighting stable.
"""

import string
from dataclasses import dataclass, field

import numpy as np

from .legendre import legendre_normalized_all

__all__ = ["DensityModel", "fit_density", "eval_density"]


def _contract(coeffs, ladders):
    """Contract a coefficient tensor against one ladder matrix per axis.

    ``coeffs`` has shape ``(d+1,) * k`` and each ladder has shape ``(n, d+1)``;
    the result is the length-``n`` vector of expansion values.
    """
    k = coeffs.ndim
    axes = string.ascii_lowercase[:k]
    subs = ",".join(f"n{a}" for a in axes) + "," + axes + "->n"
    return np.einsum(subs, *ladders, coeffs)


@dataclass
class DensityModel:
    """Fitted marginal-density expansions for a family of feature subsets."""

    coefficients: dict = field(default_factory=dict)
    d_density: int = 0
    clip_floor: float = 0.01

    def __post_init__(self):
        if self.clip_floor <= 0:
            raise ValueError(f"clip floor must be positive, got {self.clip_floor}")
        if self.d_density < 0:
            raise ValueError(f"d_density must be >= 0, got {self.d_density}")

    @property
    def subsets(self):
        return tuple(self.coefficients.keys())

    def evaluate(self, subset, points):
        """Clipped density value(s) for ``subset`` at points of shape ``(n, |S|)``.

        Always returns values >= the clip floor.
        """
        raw = self.evaluate_unclipped(subset, points)
        return np.maximum(self.clip_floor, raw)

    def evaluate_unclipped(self, subset, points):
        subset = tuple(subset)
        if subset not in self.coefficients:
            raise KeyError(f"no density fitted for subset {subset}")
        coeffs = self.coefficients[subset]
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != len(subset):
            raise ValueError(
                f"expected points of dimension {len(subset)}, got {points.shape[1]}"
            )
        ladders = legendre_normalized_all(self.d_density, points)
        return _contract(coeffs, [ladders[:, a, :] for a in range(len(subset))])


def fit_density(X_scaled, subsets, d_density, clip_floor):
    """Project the empirical measure of ``X_scaled`` onto the tensor basis.

    Parameters
    ----------
    X_scaled : (n, p) array in [-1, 1]
    subsets : iterable of non-empty feature index tuples
    d_density : max per-axis expansion degree (0 gives the uniform density)
    clip_floor : positive floor applied at evaluation time
    """
    X_scaled = np.atleast_2d(np.asarray(X_scaled, dtype=float))
    n, p = X_scaled.shape
    if n < 1:
        raise ValueError("need at least one row to fit densities")
    if clip_floor <= 0:
        raise ValueError(f"clip floor must be positive, got {clip_floor}")
    if d_density < 0:
        raise ValueError(f"d_density must be >= 0, got {d_density}")

    ladders = legendre_normalized_all(d_density, X_scaled)  # (n, p, d+1)
    coefficients = {}
    for subset in subsets:
        subset = tuple(sorted(int(j) for j in subset))
        if len(subset) == 0:
            raise ValueError("cannot fit a density for the empty subset")
        if subset[0] < 0 or subset[-1] >= p:
            raise ValueError(f"subset {subset} out of range for p={p}")
        if subset in coefficients:
            continue
        k = len(subset)
        axes = string.ascii_lowercase[:k]
        subs = ",".join(f"n{a}" for a in axes) + "->" + axes
        coeffs = np.einsum(subs, *[ladders[:, j, :] for j in subset]) / n
        # the zero multi-index averages a constant: pin it to the exact value
        coeffs[(0,) * k] = 2.0 ** (-k / 2.0)
        coefficients[subset] = coeffs
    return DensityModel(coefficients=coefficients, d_density=d_density, clip_floor=clip_floor)


def eval_density(model, subset, points):
    """Functional alias for :meth:`DensityModel.evaluate`."""
    return model.evaluate(subset, points)
