"""Analytic benchmark cases with exact densities and decomposition components.

Two three-feature cases are provided. The first draws from a
Farlie-Gumbel-Morgenstern density on the cube,

    f_rho(x) = (1 + rho (x1 x2 + x1 x3 + x2 x3)) / 8,       rho in (-1/3, 1),

whose order-1 and order-2 marginals are explicit (uniform halves and
``(1 + rho x_i x_j) / 4``). The second applies tanh coordinate-wise to an
equicorrelated Gaussian vector, giving marginals that blow up at the cube
boundary — a deliberately harder, unbounded-density setting.

Both cases share the same target: a sum of two main effects on the first
two features plus one pair effect, all expressed as fixed combinations of
normalized Legendre numerators divided by the case's own marginals. The
third feature never enters the target, which makes "does the method assign
it zero contribution" a sharp test. Case objects expose
``evaluate(subset, points)`` so they can stand in for a fitted density
model wherever exact marginals are wanted.
"""

import math
from dataclasses import dataclass

import numpy as np

from .legendre import legendre_normalized_all

__all__ = ["FgmCase", "GaussTanhCase", "UniformCubeDensity", "BENCHMARK_CASES"]

# fixed numerator recipes: subset -> list of (weight, degrees)
_COMPONENT_NUMERATORS = {
    (0,): [(math.sqrt(2.0 / 7.0), (3,)), (-math.sqrt(2.0 / 3.0), (1,))],
    (1,): [(math.sqrt(2.0 / 3.0), (1,)), (math.sqrt(2.0 / 5.0), (2,))],
    (0, 1): [(2.0 / 9.0, (4, 4)), (2.0 / 17.0, (8, 8))],
}
_MAX_NUMERATOR_DEGREE = 8


def _numerator(subset, points):
    """Weighted sum of normalized-Legendre products for one target component."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    ladders = legendre_normalized_all(_MAX_NUMERATOR_DEGREE, points)
    out = np.zeros(points.shape[0])
    for weight, degrees in _COMPONENT_NUMERATORS[subset]:
        term = np.full(points.shape[0], weight)
        for axis, m in enumerate(degrees):
            term = term * ladders[:, axis, m]
        out += term
    return out


class _AnalyticCase:
    """Shared target machinery; subclasses provide the marginals."""

    p = 3

    def evaluate(self, subset, points):
        """Exact marginal density of ``subset`` at points of shape ``(n, |S|)``."""
        subset = tuple(sorted(int(j) for j in subset))
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != len(subset):
            raise ValueError(f"expected {len(subset)}-dimensional points for subset {subset}")
        if len(subset) == 1:
            return self.marginal1(points[:, 0])
        if len(subset) == 2:
            return self.marginal2(points[:, 0], points[:, 1])
        if subset == (0, 1, 2):
            return self.density(points)
        raise KeyError(f"no marginal available for subset {subset}")

    def component(self, subset, points):
        """Theoretical component for ``subset``; zero off the target support.

        ``points`` may be a single point (scalar for order-1 subsets, a
        length-``|S|`` vector otherwise) or a batch of shape ``(n, |S|)``;
        order-1 subsets also accept a flat grid of shape ``(n,)``.
        """
        subset = tuple(sorted(int(j) for j in subset))
        if subset == ():
            return 0.0
        pts = np.asarray(points, dtype=float)
        if len(subset) == 1:
            one_point = pts.ndim == 0
            pts = pts.reshape(-1, 1)
        else:
            one_point = pts.ndim == 1
            pts = np.atleast_2d(pts)
        if subset not in _COMPONENT_NUMERATORS:
            vals = np.zeros(pts.shape[0])
        else:
            vals = _numerator(subset, pts) / self.evaluate(subset, pts)
        return float(vals[0]) if one_point else vals

    def target(self, X):
        """Full target: main effects on features 0 and 1 plus their pair effect."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return (
            self.component((0,), X[:, [0]])
            + self.component((1,), X[:, [1]])
            + self.component((0, 1), X[:, [0, 1]])
        )


@dataclass(frozen=True)
class FgmCase(_AnalyticCase):
    """Trilinear Farlie-Gumbel-Morgenstern density on [-1, 1]^3."""

    rho: float = 0.5

    def __post_init__(self):
        if not -1.0 / 3.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (-1/3, 1), got {self.rho}")

    def density(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        tri = X[:, 0] * X[:, 1] + X[:, 0] * X[:, 2] + X[:, 1] * X[:, 2]
        return (1.0 + self.rho * tri) / 8.0

    def marginal1(self, x):
        return np.full(np.shape(np.asarray(x)), 0.5)

    def marginal2(self, xi, xj):
        xi = np.asarray(xi, dtype=float)
        xj = np.asarray(xj, dtype=float)
        return (1.0 + self.rho * xi * xj) / 4.0

    def acceptance_probability(self, U):
        """Per-proposal acceptance probability against the uniform envelope."""
        U = np.atleast_2d(np.asarray(U, dtype=float))
        tri = U[:, 0] * U[:, 1] + U[:, 0] * U[:, 2] + U[:, 1] * U[:, 2]
        envelope = 1.0 + 3.0 * self.rho if self.rho >= 0 else 1.0 - self.rho
        return (1.0 + self.rho * tri) / envelope

    def sample(self, n, seed):
        """Draw ``n`` i.i.d. points by rejection against Uniform([-1, 1]^3)."""
        rng = np.random.default_rng(seed)
        out = np.empty((n, 3))
        filled = 0
        while filled < n:
            m = max(2 * (n - filled), 128)
            U = rng.uniform(-1.0, 1.0, size=(m, 3))
            keep = rng.uniform(size=m) < self.acceptance_probability(U)
            take = U[keep][: n - filled]
            out[filled : filled + take.shape[0]] = take
            filled += take.shape[0]
        return out


@dataclass(frozen=True)
class GaussTanhCase(_AnalyticCase):
    """tanh of an equicorrelated Gaussian vector: unbounded marginals at +-1."""

    rho: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")

    def _check_domain(self, *coords):
        for x in coords:
            if np.any(np.abs(np.asarray(x)) >= 1.0):
                raise ValueError("density is only defined strictly inside (-1, 1)")

    def marginal1(self, x):
        x = np.asarray(x, dtype=float)
        self._check_domain(x)
        s = np.arctanh(x)
        return np.exp(-0.5 * s**2) / (math.sqrt(2.0 * math.pi) * (1.0 - x**2))

    def marginal2(self, xi, xj):
        xi = np.asarray(xi, dtype=float)
        xj = np.asarray(xj, dtype=float)
        self._check_domain(xi, xj)
        si, sj = np.arctanh(xi), np.arctanh(xj)
        rho = self.rho
        quad = (si**2 - 2.0 * rho * si * sj + sj**2) / (2.0 * (1.0 - rho**2))
        norm = 2.0 * math.pi * math.sqrt(1.0 - rho**2) * (1.0 - xi**2) * (1.0 - xj**2)
        return np.exp(-quad) / norm

    def density(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        self._check_domain(X)
        S = np.arctanh(X)
        rho = self.rho
        cov = np.full((3, 3), rho)
        np.fill_diagonal(cov, 1.0)
        prec = np.linalg.inv(cov)
        det = np.linalg.det(cov)
        quad = np.einsum("ni,ij,nj->n", S, prec, S)
        jac = np.prod(1.0 - X**2, axis=1)
        return np.exp(-0.5 * quad) / ((2.0 * math.pi) ** 1.5 * math.sqrt(det) * jac)

    def sample(self, n, seed):
        """tanh of correlated normals, via a lower-triangular covariance factor."""
        rng = np.random.default_rng(seed)
        cov = np.full((3, 3), self.rho)
        np.fill_diagonal(cov, 1.0)
        L = np.linalg.cholesky(cov)
        Z = rng.standard_normal((n, 3)) @ L.T
        return np.tanh(Z)


class UniformCubeDensity:
    """Exact product-uniform marginals on [-1, 1]^p: f_S = 2**(-|S|)."""

    def __init__(self, p):
        self.p = p

    def evaluate(self, subset, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return np.full(points.shape[0], 2.0 ** (-len(tuple(subset))))


BENCHMARK_CASES = {"fgm": FgmCase, "gauss-tanh": GaussTanhCase}
