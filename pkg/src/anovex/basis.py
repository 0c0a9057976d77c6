"""Truncated inverse-density-weighted basis and design-matrix assembly.

A basis element for a non-empty subset ``S`` with positive degrees ``m`` is

    xi_S^m(x) = 2**(-(p - |S|)/2) * prod_{j in S} Ptilde_{m_j}(x_j) / f_S(x_S),

the tensor-product numerator divided by the (clipped) marginal density of
``x_S``; the empty element is the constant 1. Dividing by ``f_S`` is what
buys hierarchical orthogonality under dependent inputs, at the price of
columns whose scales vary with the density — the solver restandardizes.

The truncation keeps all subsets up to interaction order ``K`` with degrees
in ``1..d``, which has exactly ``sum_k C(p, k) d^k`` elements.
"""

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .legendre import TensorIndex, legendre_normalized_all

__all__ = [
    "TruncationSet",
    "DesignMatrix",
    "enumerate_truncation",
    "truncation_size",
    "weighted_basis_value",
    "build_design_matrix",
]


def truncation_size(p, K, d):
    """Number of indices kept: ``sum_{k=0}^{K} C(p, k) d^k``."""
    from math import comb

    return sum(comb(p, k) * d**k for k in range(K + 1))


@dataclass(frozen=True)
class TruncationSet:
    """Deterministically ordered list of kept basis indices.

    Ordering is by interaction order, then lexicographic subset, then
    lexicographic degrees; the empty index always comes first. Indices of a
    given subset therefore occupy a contiguous column range.
    """

    p: int
    K: int
    d: int
    indices: tuple

    def __len__(self):
        return len(self.indices)

    def groups(self):
        """Yield ``(subset, degree_tuples, column_slice)`` per contiguous block."""
        start = 0
        while start < len(self.indices):
            subset = self.indices[start].subset
            stop = start
            while stop < len(self.indices) and self.indices[stop].subset == subset:
                stop += 1
            yield subset, [ix.degrees for ix in self.indices[start:stop]], slice(start, stop)
            start = stop

    @property
    def subsets(self):
        """All non-empty subsets, in column order."""
        return tuple(s for s, _, _ in self.groups() if s)


def enumerate_truncation(p, K, d):
    """Enumerate the truncation set for ``p`` features, order ``K``, degree ``d``."""
    if not 1 <= K <= p:
        raise ValueError(f"interaction order K must satisfy 1 <= K <= p, got K={K}, p={p}")
    if d < 1:
        raise ValueError(f"max degree d must be >= 1, got {d}")
    indices = [TensorIndex(subset=(), degrees=(), ambient_dim=p)]
    for k in range(1, K + 1):
        for subset in combinations(range(p), k):
            for degrees in product(range(1, d + 1), repeat=k):
                indices.append(TensorIndex(subset=subset, degrees=degrees, ambient_dim=p))
    assert len(indices) == truncation_size(p, K, d)
    return TruncationSet(p=p, K=K, d=d, indices=tuple(indices))


@dataclass(frozen=True)
class DesignMatrix:
    """Dense basis evaluations, one row per sample and one column per index."""

    values: np.ndarray
    truncation: TruncationSet

    @property
    def n(self):
        return self.values.shape[0]


def weighted_basis_value(index, x_scaled, density):
    """Evaluate one weighted basis element at scaled point(s).

    ``density`` is any object exposing ``evaluate(subset, points)`` returning
    positive values, e.g. a fitted :class:`~anovex.density.DensityModel` or an
    exact analytic density. The empty index evaluates to exactly 1.
    """
    x = np.atleast_2d(np.asarray(x_scaled, dtype=float))
    if not index.subset:
        out = np.ones(x.shape[0])
        return out if out.size > 1 else 1.0
    scale = 2.0 ** (-(index.ambient_dim - index.order) / 2.0)
    num = np.full(x.shape[0], scale)
    for j, m in zip(index.subset, index.degrees):
        num = num * legendre_normalized_all(m, x[:, j])[:, m]
    out = num / density.evaluate(index.subset, x[:, index.subset])
    return out if out.size > 1 else float(out[0])


def _numerator_block(ladders, subset, d):
    """All-degree numerator products for one subset: shape ``(n, d**|S|)``.

    Column order is lexicographic in the degree tuple (last feature fastest),
    matching :func:`enumerate_truncation`.
    """
    block = ladders[:, subset[0], 1 : d + 1]
    for j in subset[1:]:
        block = (block[:, :, None] * ladders[:, j, None, 1 : d + 1]).reshape(
            block.shape[0], -1
        )
    return block


def build_design_matrix(X_scaled, truncation, density):
    """Assemble the dense design matrix of weighted basis evaluations.

    Column 0 is the constant 1; each later column is one weighted element
    evaluated at the scaled sample. Assembly is vectorized per subset block.
    """
    X_scaled = np.atleast_2d(np.asarray(X_scaled, dtype=float))
    n, p = X_scaled.shape
    if p != truncation.p:
        raise ValueError(f"data has {p} features but truncation expects {truncation.p}")
    ladders = legendre_normalized_all(truncation.d, X_scaled)  # (n, p, d+1)
    values = np.empty((n, len(truncation)))
    for subset, _degrees, cols in truncation.groups():
        if not subset:
            values[:, cols] = 1.0
            continue
        scale = 2.0 ** (-(p - len(subset)) / 2.0)
        block = _numerator_block(ladders, subset, truncation.d)
        f = density.evaluate(subset, X_scaled[:, subset])
        values[:, cols] = block * (scale / f)[:, None]
    return DesignMatrix(values=values, truncation=truncation)
