"""Two-stage sparse linear solve: lasso-mode LARS path + BIC, then SVD refit.

Support selection walks the LARS regularization path (lasso variant, so
columns may drop back out) and keeps the step whose support minimizes

    BIC(k) = n * ln(RSS_k / n) + k * ln(n),        k = support size + intercept.

The reduced system on the selected columns is then re-solved exactly with a
minimum-norm SVD least squares.

The inverse-density weighting gives raw basis columns wildly different
scales, and LARS correlation steps are scale-sensitive, so the path runs on
columns rescaled to unit Euclidean norm with the response centered; reported
coefficients are mapped back to original column units. The intercept column
never competes for selection — it is always part of the final solve.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.exceptions import ConvergenceWarning
from sklearn.linear_model import lars_path as _sk_lars_path

from .basis import DesignMatrix

__all__ = ["LarsStep", "LarsPath", "SolveReport", "lars_path", "bic_select", "solve_reduced"]


@dataclass(frozen=True)
class LarsStep:
    """One kink of the path: active support, sparse coefficients, fit quality."""

    support: tuple
    coefficients: dict  # column index -> coefficient in original column units
    rss: float
    penalty: float  # lasso penalty (standardized system, 1/(2n) loss convention)


@dataclass(frozen=True)
class LarsPath:
    steps: tuple
    column_norms: np.ndarray  # per design column; 0 marks a skipped column
    y_mean: float
    skipped_columns: tuple


@dataclass(frozen=True)
class SolveReport:
    """Audit record of one selection + refit."""

    selected_support: tuple  # design columns of the final solve, intercept first
    coefficients: np.ndarray
    bic_values: tuple
    rank: int


def _design_values(B):
    return B.values if isinstance(B, DesignMatrix) else np.asarray(B, dtype=float)


def lars_path(B, y, max_steps=500):
    """Trace the lasso-mode LARS path over the non-intercept columns of ``B``.

    ``B`` is a :class:`~anovex.basis.DesignMatrix` (or plain array) whose
    column 0 is the all-ones intercept. Columns that are identically zero
    after rescaling are skipped and flagged.
    """
    values = _design_values(B)
    y = np.asarray(y, dtype=float)
    if values.ndim != 2 or values.shape[1] < 1:
        raise ValueError("design matrix must be 2-D with at least one column")
    if values.shape[0] != y.shape[0]:
        raise ValueError(f"design has {values.shape[0]} rows but y has {y.shape[0]}")
    if values.shape[0] < 2:
        raise ValueError("need at least 2 rows")
    if not np.isfinite(values).all() or not np.isfinite(y).all():
        raise ValueError("non-finite entries in design matrix or response")

    y_mean = float(y.mean())
    y_c = y - y_mean

    norms = np.linalg.norm(values, axis=0)
    norms[0] = 0.0  # intercept never enters the path
    usable = np.flatnonzero(norms > 0)
    skipped = tuple(int(j) for j in np.flatnonzero(norms[1:] == 0.0) + 1)

    column_norms = norms.copy()
    empty = LarsStep(support=(), coefficients={}, rss=float(y_c @ y_c), penalty=np.inf)
    if usable.size == 0 or float(np.abs(values[:, usable].T @ y_c).max()) == 0.0:
        return LarsPath(
            steps=(empty,), column_norms=column_norms, y_mean=y_mean, skipped_columns=skipped
        )

    Xs = values[:, usable] / norms[usable]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        alphas, _active, coefs = _sk_lars_path(
            Xs, y_c, method="lasso", max_iter=max_steps, copy_X=True
        )

    ever_active = np.flatnonzero(np.any(coefs != 0.0, axis=1))
    preds = Xs[:, ever_active] @ coefs[ever_active, :] if ever_active.size else 0.0
    rss = ((y_c[:, None] - preds) ** 2).sum(axis=0)

    steps = []
    for k in range(coefs.shape[1]):
        local = np.flatnonzero(coefs[:, k])
        cols = usable[local]
        coeff_map = {
            int(c): float(coefs[l, k] / norms[c]) for c, l in zip(cols, local)
        }
        steps.append(
            LarsStep(
                support=tuple(int(c) for c in cols),
                coefficients=coeff_map,
                rss=float(rss[k]),
                penalty=float(alphas[k]),
            )
        )
    return LarsPath(
        steps=tuple(steps), column_norms=column_norms, y_mean=y_mean, skipped_columns=skipped
    )


def bic_values(path, n):
    """BIC of every path step; the intercept counts toward the support size."""
    ns = float(n)
    out = []
    for step in path.steps:
        k = len(step.support) + 1
        out.append(ns * np.log(max(step.rss / ns, 1e-300)) + k * np.log(ns))
    return np.asarray(out)


def bic_select(path, n):
    """Support (non-intercept columns) of the BIC-minimizing path step.

    Ties break toward the smaller support, then the earlier step.
    """
    if not path.steps:
        raise ValueError("empty path")
    bics = bic_values(path, n)
    order = sorted(
        range(len(path.steps)), key=lambda i: (bics[i], len(path.steps[i].support), i)
    )
    return path.steps[order[0]].support


def solve_reduced(B_reduced, y, return_rank=False):
    """Minimum-norm least-squares solution of the reduced system via thin SVD.

    Singular values below ``eps * max(n, k) * sigma_max`` are treated as zero.
    """
    B_reduced = np.asarray(B_reduced, dtype=float)
    y = np.asarray(y, dtype=float)
    if B_reduced.ndim != 2 or B_reduced.shape[1] < 1:
        raise ValueError("reduced matrix must be 2-D with at least one column")
    if not np.isfinite(B_reduced).all() or not np.isfinite(y).all():
        raise ValueError("non-finite entries in reduced system")
    rcond = np.finfo(float).eps * max(B_reduced.shape)
    coef, _res, rank, _sv = np.linalg.lstsq(B_reduced, y, rcond=rcond)
    if return_rank:
        return coef, int(rank)
    return coef
