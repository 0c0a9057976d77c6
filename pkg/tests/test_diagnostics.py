"""Reconstruction R^2, cosine table and the filtered worst-cosine metric."""

import numpy as np
import pytest

from anovex import (
    FitConfig,
    compute_metrics,
    cosine_table,
    fit_decomposition,
    max_corr,
    reconstruction_r2,
)


@pytest.fixture(scope="module")
def fgm_k2_fit(fgm_case):
    X = fgm_case.sample(8000, seed=21)
    y = fgm_case.target(X)
    model = fit_decomposition(
        X, y, FitConfig(K=2, d=8, d_density=8, scale_features=False)
    )
    return X, y, model


class TestR2:
    def test_exact_reconstruction_is_one(self):
        # response inside the selected span: R^2 reaches 1 to tight tolerance
        rng = np.random.default_rng(0)
        X = rng.uniform(-1, 1, size=(2000, 2))
        y = 1.0 + np.sqrt(1.5) * X[:, 0] * 2.0
        model = fit_decomposition(
            X, y, FitConfig(K=1, d=2, d_density=0, scale_features=False)
        )
        assert reconstruction_r2(model, X, y) == pytest.approx(1.0, abs=1e-10)

    def test_mean_only_prediction_gives_zero(self):
        rng = np.random.default_rng(1)
        X = rng.uniform(-1, 1, size=(500, 2))
        y = rng.normal(size=500)  # pure noise: BIC keeps the intercept alone
        model = fit_decomposition(X, y, FitConfig(K=1, d=3, d_density=2))
        if model.support == ():
            assert reconstruction_r2(model, X, y) == pytest.approx(0.0, abs=1e-12)
        else:
            pytest.skip("selection picked a noise column on this draw")

    def test_fgm_quality(self, fgm_k2_fit):
        X, y, model = fgm_k2_fit
        assert reconstruction_r2(model, X, y) >= 0.9


class TestCosineTable:
    def test_centering_rows_vanish_on_fit_data(self, fgm_k2_fit):
        X, _y, model = fgm_k2_fit
        for entry in cosine_table(model, X):
            if entry.t == ():
                assert abs(entry.cosine) < 1e-10

    def test_main_effect_only_model_has_only_centering_rows(self):
        rng = np.random.default_rng(2)
        X = rng.uniform(-1, 1, size=(2000, 3))
        y = X[:, 0] + X[:, 1] ** 2
        model = fit_decomposition(X, y, FitConfig(K=1, d=3, d_density=2))
        table = cosine_table(model, X)
        assert table and all(entry.t == () for entry in table)

    def test_bounded_by_one(self, fgm_k2_fit):
        X, _y, model = fgm_k2_fit
        for entry in cosine_table(model, X):
            assert abs(entry.cosine) <= 1 + 1e-12

    def test_theoretical_fgm_cosines_small(self, fgm_case, fgm_sample_100k):
        X = fgm_sample_100k
        comps = {
            (0,): fgm_case.component((0,), X[:, 0]),
            (1,): fgm_case.component((1,), X[:, 1]),
            (0, 1): fgm_case.component((0, 1), X[:, [0, 1]]),
        }
        for s, t in [((0,), ()), ((1,), ()), ((0, 1), ()), ((0, 1), (0,)), ((0, 1), (1,))]:
            vs = comps[s]
            if t == ():
                cos = vs.mean() / np.sqrt(np.mean(vs**2))
            else:
                vt = comps[t]
                cos = np.mean(vs * vt) / np.sqrt(np.mean(vs**2) * np.mean(vt**2))
            assert abs(cos) <= 0.02

    def test_no_components_rejected(self):
        rng = np.random.default_rng(3)
        X = rng.uniform(-1, 1, size=(300, 2))
        model = fit_decomposition(X, np.zeros(300), FitConfig(K=1, d=2, d_density=2))
        with pytest.raises(ValueError):
            cosine_table(model, X)


class TestMaxCorr:
    def test_main_effects_only_gives_zero(self):
        rng = np.random.default_rng(4)
        X = rng.uniform(-1, 1, size=(2000, 3))
        y = X[:, 0] + 2 * X[:, 1]
        model = fit_decomposition(X, y, FitConfig(K=1, d=3, d_density=2))
        assert max_corr(model, X) == 0.0

    def test_fgm_k2_small(self, fgm_k2_fit):
        X, _y, model = fgm_k2_fit
        assert max_corr(model, X) <= 0.1

    def test_unreachable_threshold_gives_zero(self, fgm_k2_fit):
        X, _y, model = fgm_k2_fit
        assert max_corr(model, X, share_threshold=1.1) == 0.0

    def test_monotone_in_threshold(self, fgm_k2_fit):
        X, _y, model = fgm_k2_fit
        thresholds = [0.0, 0.005, 0.01, 0.05, 0.2, 1.1]
        vals = [max_corr(model, X, share_threshold=t) for t in thresholds]
        assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_scale_invariance(self, fgm_case):
        X = fgm_case.sample(4000, seed=5)
        y = fgm_case.target(X)
        cfg = FitConfig(K=2, d=6, d_density=6, scale_features=False)
        m1 = fit_decomposition(X, y, cfg)
        m2 = fit_decomposition(X, 10.0 * y, cfg)
        t1 = {(e.s, e.t): e.cosine for e in cosine_table(m1, X)}
        t2 = {(e.s, e.t): e.cosine for e in cosine_table(m2, X)}
        shared = set(t1) & set(t2)
        assert shared
        for key in shared:
            assert t1[key] == pytest.approx(t2[key], abs=1e-6)


class TestComputeMetrics:
    def test_report_fields(self, fgm_k2_fit):
        X, y, model = fgm_k2_fit
        report = compute_metrics(model, X, y, fit_seconds=1.23)
        assert report.fit_seconds == 1.23
        assert report.r2 >= 0.9
        assert 0 <= report.max_corr <= 1
        assert report.max_corr == max_corr(model, X)
        assert set(report.variance_shares) == set(model.selected_subsets)
        assert not report.degenerate_variance

    def test_degenerate_flagged(self):
        rng = np.random.default_rng(6)
        X = rng.uniform(-1, 1, size=(200, 2))
        model = fit_decomposition(X, np.full(200, 2.0), FitConfig(K=1, d=2, d_density=2))
        report = compute_metrics(model, X, np.full(200, 2.0))
        assert report.r2 == 1.0
        assert report.variance_shares == {}
        assert report.max_corr == 0.0
