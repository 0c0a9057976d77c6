"""Legendre polynomials and tensorized orthonormal basis numerators.

Everything here lives on ``[-1, 1]`` (per axis) with the Lebesgue measure.
The two building blocks are the degree ladder ``P_0 .. P_d`` obtained from
the three-term recurrence, and the tensor-product numerators built from the
orthonormalized ladder.  No domain clamping happens here: polynomials are
happily evaluated slightly outside ``[-1, 1]``; keeping inputs in range is
the scaler's job.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "legendre_all",
    "legendre_normalized_all",
    "TensorIndex",
    "tensor_basis_value",
]


def legendre_all(max_degree, x):
    """Evaluate the Legendre ladder ``P_0(x) .. P_max_degree(x)``.

    Uses the three-term recurrence
    ``(m+1) P_{m+1}(x) = (2m+1) x P_m(x) - m P_{m-1}(x)``
    with ``P_0 = 1`` and ``P_1 = x``, evaluating all degrees in one pass.

    Parameters
    ----------
    max_degree : int
        Highest degree to evaluate, >= 0.
    x : scalar or ndarray
        Evaluation points. The degree axis is appended last, so the result
        has shape ``x.shape + (max_degree + 1,)``.
    """
    if max_degree < 0:
        raise ValueError(f"max_degree must be >= 0, got {max_degree}")
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape + (max_degree + 1,))
    out[..., 0] = 1.0
    if max_degree >= 1:
        out[..., 1] = x
    for m in range(1, max_degree):
        out[..., m + 1] = ((2 * m + 1) * x * out[..., m] - m * out[..., m - 1]) / (m + 1)
    return out


def legendre_normalized_all(max_degree, x):
    """Evaluate the orthonormalized ladder ``sqrt((2m+1)/2) * P_m(x)``.

    The scaling makes the family orthonormal in ``L^2([-1, 1])`` with the
    plain (unhalved) Lebesgue measure.
    """
    out = legendre_all(max_degree, x)
    out *= np.sqrt((2.0 * np.arange(max_degree + 1) + 1.0) / 2.0)
    return out


@dataclass(frozen=True)
class TensorIndex:
    """One tensor-product basis index: a feature subset plus per-feature degrees.

    ``subset`` is strictly increasing over ``[0, ambient_dim)``; ``degrees``
    are all positive (degree 0 never appears in a numerator, the constant
    direction is carried by the empty index instead).
    """

    subset: tuple
    degrees: tuple
    ambient_dim: int

    def __post_init__(self):
        subset = tuple(int(j) for j in self.subset)
        degrees = tuple(int(m) for m in self.degrees)
        object.__setattr__(self, "subset", subset)
        object.__setattr__(self, "degrees", degrees)
        if len(subset) != len(degrees):
            raise ValueError(
                f"subset and degrees must have equal length, got {subset} / {degrees}"
            )
        if len(subset) > self.ambient_dim:
            raise ValueError(f"subset {subset} larger than ambient dimension {self.ambient_dim}")
        if any(b <= a for a, b in zip(subset, subset[1:])):
            raise ValueError(f"subset must be strictly increasing, got {subset}")
        if subset and (subset[0] < 0 or subset[-1] >= self.ambient_dim):
            raise ValueError(
                f"subset {subset} out of range for ambient dimension {self.ambient_dim}"
            )
        if any(m < 1 for m in degrees):
            raise ValueError(f"degrees must be positive in a non-empty index, got {degrees}")

    @property
    def order(self):
        return len(self.subset)


def tensor_basis_value(index, x):
    """Evaluate the tensor-product numerator for ``index`` at point(s) ``x``.

    For a subset ``S`` with degrees ``(m_j)`` this is
    ``2**(-(p - |S|)/2) * prod_j Ptilde_{m_j}(x_j)``; the empty index gives
    the constant ``2**(-p/2)``.

    ``x`` may be a single point of shape ``(p,)`` or a batch ``(n, p)``.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[1] != index.ambient_dim:
        raise ValueError(
            f"point dimension {x.shape[1]} does not match ambient dimension {index.ambient_dim}"
        )
    scale = 2.0 ** (-(index.ambient_dim - index.order) / 2.0)
    vals = np.full(x.shape[0], scale)
    for j, m in zip(index.subset, index.degrees):
        vals = vals * legendre_normalized_all(m, x[:, j])[:, m]
    return vals if vals.size > 1 else float(vals[0])
