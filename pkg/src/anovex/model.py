"""Fit orchestration and the fitted decomposition object.

The full pipeline is: scale features -> estimate marginal densities ->
enumerate the truncation -> assemble the design matrix -> LARS path ->
BIC support selection -> minimum-norm refit -> recenter components.

Recentering subtracts the empirical mean of every non-empty component over
the fit data and absorbs the sum into the constant term; it is a pure
translation, so the reconstruction is unchanged while each component becomes
empirically mean-zero.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .basis import build_design_matrix, enumerate_truncation, truncation_size
from .density import DensityModel, fit_density
from .legendre import legendre_normalized_all
from .scaling import ScalerParams, fit_scaler, transform
from .solver import SolveReport, bic_select, bic_values, lars_path, solve_reduced

__all__ = ["FitConfig", "DecompositionModel", "Attribution", "fit_decomposition"]


@dataclass(frozen=True)
class FitConfig:
    """Hyperparameters of one decomposition fit.

    ``K`` is the interaction order, ``d`` the max numerator degree,
    ``d_density`` the density-expansion degree and ``clip_floor`` the density
    clipping value. The core fit is deterministic; ``seed`` only feeds
    randomized subroutines such as benchmark samplers. ``scale_features``
    may be disabled for data already living in [-1, 1]^p.
    """

    K: int = 2
    d: int = 10
    d_density: int = 4
    clip_floor: float = 0.01
    seed: int = 0
    scale_features: bool = True
    max_path_steps: int = 500

    def validate(self, p):
        if not 1 <= self.K <= p:
            raise ValueError(f"K must satisfy 1 <= K <= p={p}, got {self.K}")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if self.d_density < 0:
            raise ValueError(f"d_density must be >= 0, got {self.d_density}")
        if self.clip_floor <= 0:
            raise ValueError(f"clip floor must be positive, got {self.clip_floor}")


@dataclass(frozen=True)
class Attribution:
    """Per-feature additive attributions at one or more points.

    ``phi[..., i]`` collects every selected component containing feature
    ``i``, each divided by its interaction order, so the rows sum to
    ``prediction - baseline`` exactly (Harsanyi allocation).
    """

    phi: np.ndarray
    baseline: float
    prediction: np.ndarray
    residual: np.ndarray = None


@dataclass
class DecompositionModel:
    """Fitted functional decomposition of a black-box response."""

    feature_names: list
    scaler: ScalerParams  # None when the fit consumed pre-scaled data
    density: DensityModel
    K: int
    d: int
    support: tuple  # selected non-empty TensorIndex, in truncation order
    coefficients: np.ndarray  # aligned with support
    offsets: dict  # subset -> recentering offset
    nu_empty: float
    solve_report: SolveReport = None
    _groups: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        if not self._groups:
            self._groups = _group_support(self.support, self.coefficients)

    @property
    def p(self):
        return len(self.feature_names)

    @property
    def selected_subsets(self):
        return tuple(subset for subset, _, _ in self._groups)

    def scale(self, X_raw):
        X_raw = np.atleast_2d(np.asarray(X_raw, dtype=float))
        if X_raw.shape[1] != self.p:
            raise ValueError(f"expected {self.p} features, got {X_raw.shape[1]}")
        return transform(self.scaler, X_raw) if self.scaler is not None else X_raw

    def component_values(self, X_raw):
        """Evaluate every selected non-empty component; returns subset -> (n,)."""
        X_scaled = self.scale(X_raw)
        n = X_scaled.shape[0]
        if not self._groups:
            return {}
        d_max = max(max(ix.degrees) for ix in self.support)
        ladders = legendre_normalized_all(d_max, X_scaled)
        out = {}
        for subset, degree_rows, coefs in self._groups:
            scale = 2.0 ** (-(self.p - len(subset)) / 2.0)
            num = np.full((n, len(degree_rows)), scale)
            for pos, j in enumerate(subset):
                num *= ladders[:, j, [row[pos] for row in degree_rows]]
            f = self.density.evaluate(subset, X_scaled[:, subset])
            out[subset] = (num / f[:, None]) @ coefs - self.offsets[subset]
        return out

    def component(self, subset, X_raw):
        """One component at raw point(s); empty -> the constant, unselected -> 0."""
        subset = tuple(int(j) for j in subset)
        X_raw = np.asarray(X_raw, dtype=float)
        one_point = X_raw.ndim == 1
        n = 1 if one_point else X_raw.shape[0]
        if subset == ():
            vals = np.full(n, self.nu_empty)
        elif subset not in self.offsets:
            vals = np.zeros(n)
        else:
            X2 = np.atleast_2d(X_raw)
            group = next(g for g in self._groups if g[0] == subset)
            vals = self._eval_group(group, X2)
        return float(vals[0]) if one_point else vals

    def _eval_group(self, group, X_raw):
        subset, degree_rows, coefs = group
        X_scaled = self.scale(X_raw)
        d_max = max(max(row) for row in degree_rows)
        ladders = legendre_normalized_all(d_max, X_scaled)
        scale = 2.0 ** (-(self.p - len(subset)) / 2.0)
        num = np.full((X_scaled.shape[0], len(degree_rows)), scale)
        for pos, j in enumerate(subset):
            num *= ladders[:, j, [row[pos] for row in degree_rows]]
        f = self.density.evaluate(subset, X_scaled[:, subset])
        return (num / f[:, None]) @ coefs - self.offsets[subset]

    def predict(self, X_raw):
        """Reconstruction: constant plus the sum of selected components."""
        X_raw = np.asarray(X_raw, dtype=float)
        one_point = X_raw.ndim == 1
        comps = self.component_values(np.atleast_2d(X_raw))
        n = np.atleast_2d(X_raw).shape[0]
        vals = np.full(n, self.nu_empty)
        for v in comps.values():
            vals = vals + v
        return float(vals[0]) if one_point else vals

    def shapley(self, X_raw, y_true=None):
        """Allocate components to features: phi_i = sum_{S containing i} comp_S / |S|."""
        X_raw = np.asarray(X_raw, dtype=float)
        one_point = X_raw.ndim == 1
        X2 = np.atleast_2d(X_raw)
        comps = self.component_values(X2)
        phi = np.zeros((X2.shape[0], self.p))
        for subset, vals in comps.items():
            share = vals / len(subset)
            for j in subset:
                phi[:, j] += share
        prediction = self.nu_empty + sum(comps.values()) if comps else np.full(
            X2.shape[0], self.nu_empty
        )
        residual = None
        if y_true is not None:
            residual = np.atleast_1d(np.asarray(y_true, dtype=float)) - prediction
            if one_point:
                residual = residual[0]
        return Attribution(
            phi=phi[0] if one_point else phi,
            baseline=self.nu_empty,
            prediction=float(prediction[0]) if one_point else prediction,
            residual=residual,
        )

    def variance_shares(self, X_raw):
        """Empirical Var(component) / Var(reconstruction) per selected subset.

        When the reconstruction has zero variance all shares are reported
        as 0 (the degenerate case is flagged by the diagnostics layer).
        """
        X_raw = np.atleast_2d(np.asarray(X_raw, dtype=float))
        if X_raw.shape[0] < 1:
            raise ValueError("need a non-empty evaluation set")
        comps = self.component_values(X_raw)
        total = self.nu_empty + sum(comps.values()) if comps else np.full(
            X_raw.shape[0], self.nu_empty
        )
        denom = float(np.var(total))
        if denom == 0.0:
            return {subset: 0.0 for subset in comps}
        return {subset: float(np.var(v) / denom) for subset, v in comps.items()}


def _group_support(support, coefficients):
    """Group selected indices by subset, preserving truncation order."""
    groups = []
    bysubset = {}
    for ix, a in zip(support, coefficients):
        if ix.subset not in bysubset:
            bysubset[ix.subset] = ([], [])
            groups.append(ix.subset)
        bysubset[ix.subset][0].append(ix.degrees)
        bysubset[ix.subset][1].append(float(a))
    return [
        (subset, bysubset[subset][0], np.asarray(bysubset[subset][1])) for subset in groups
    ]


def fit_decomposition(X_raw, y, config=None, feature_names=None, density=None):
    """Estimate the decomposition of the sampled response ``y`` over ``X_raw``.

    ``y`` holds black-box predictions at the rows of ``X_raw``; nothing is
    ever queried beyond these values. An externally supplied ``density``
    (any object with ``evaluate(subset, points)``) replaces the internal
    estimate, e.g. to plug in exact analytic marginals.
    """
    config = config or FitConfig()
    X_raw = np.atleast_2d(np.asarray(X_raw, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    n, p = X_raw.shape
    config.validate(p)
    if y.shape[0] != n:
        raise ValueError(f"X has {n} rows but y has {y.shape[0]}")
    if not np.isfinite(y).all():
        raise ValueError("non-finite values in the response")
    if feature_names is None:
        feature_names = [f"x{j + 1}" for j in range(p)]
    n_columns = truncation_size(p, config.K, config.d)
    if n <= n_columns:
        warnings.warn(
            f"sample size n={n} does not exceed the basis size N={n_columns}; "
            "the least-squares problem is underdetermined",
            stacklevel=2,
        )

    scaler = None
    if config.scale_features:
        scaler = fit_scaler(X_raw)
        X_scaled = transform(scaler, X_raw)
    else:
        X_scaled = X_raw
        if np.abs(X_scaled).max() > 1.0 + 1e-12:
            raise ValueError("scale_features=False requires data already in [-1, 1]^p")

    truncation = enumerate_truncation(p, config.K, config.d)
    if density is None:
        density = fit_density(X_scaled, truncation.subsets, config.d_density, config.clip_floor)

    B = build_design_matrix(X_scaled, truncation, density)
    path = lars_path(B, y, max_steps=config.max_path_steps)
    support_cols = bic_select(path, n)

    solve_cols = (0,) + tuple(support_cols)
    if support_cols:
        coefs, rank = solve_reduced(B.values[:, solve_cols], y, return_rank=True)
    else:
        # intercept-only least squares is the plain mean; computing it
        # directly keeps the constant-response case exact
        coefs, rank = np.array([float(np.mean(y))]), 1
    report = SolveReport(
        selected_support=solve_cols,
        coefficients=coefs,
        bic_values=tuple(float(b) for b in bic_values(path, n)),
        rank=rank,
    )

    support = tuple(truncation.indices[c] for c in support_cols)
    groups = _group_support(support, coefs[1:])
    offsets = {}
    nu_empty = float(coefs[0])
    for subset, _degree_rows, group_coefs in groups:
        cols = [c for c, ix in zip(support_cols, support) if ix.subset == subset]
        raw_vals = B.values[:, cols] @ group_coefs
        offset = float(raw_vals.mean())
        offsets[subset] = offset
        nu_empty += offset

    return DecompositionModel(
        feature_names=list(feature_names),
        scaler=scaler,
        density=density,
        K=config.K,
        d=config.d,
        support=support,
        coefficients=np.asarray(coefs[1:], dtype=float),
        offsets=offsets,
        nu_empty=nu_empty,
        solve_report=report,
    )
