import numpy as np
import pytest

from imitanet.regression import fit_degree_model, fit_mean_model


def test_degree_model_recovers_exact_curve():
    d = np.arange(1, 30, dtype=float)
    pi = 1 - np.exp(0.4 - 0.17 * d)
    pi = np.clip(pi, 0, 1)
    r = fit_degree_model(d[pi > 0], pi[pi > 0])
    assert r.coefficients["alpha"] == pytest.approx(0.17, abs=1e-12)
    assert r.coefficients["alpha0"] == pytest.approx(0.4, abs=1e-12)
    assert r.r_squared == pytest.approx(1.0, abs=1e-12)


def test_degree_model_excludes_saturated_rows():
    r = fit_degree_model([1, 2, 3, 4], [0.1, 0.2, 0.3, 1.0])
    assert r.n_obs == 3 and r.notes["excluded_saturated"] == 1


def test_mean_model_matches_lstsq_and_r2_from_residuals():
    rng = np.random.default_rng(0)
    b, a = rng.random(50), rng.random(50)
    y = 0.069 + 0.041 * b + 0.21 * a + rng.normal(0, 0.01, 50)
    r = fit_mean_model(b, a, y)
    X = np.column_stack([np.ones(50), b, a])
    ref = np.linalg.lstsq(X, y, rcond=None)[0]
    assert np.allclose([r.coefficients[k] for k in ("c0", "beta", "alpha")], ref, atol=1e-12)
    brute = 1 - np.sum(r.residuals ** 2) / np.sum((y - y.mean()) ** 2)
    assert r.r_squared == pytest.approx(brute, abs=1e-12)
    assert 0 <= r.r_squared <= 1


def test_degenerate_fits_report_zero():
    r = fit_degree_model([1, 2, 3], [0.3, 0.3, 0.3])
    assert r.r_squared == 0 and r.degenerate
    r = fit_mean_model([0.1, 0.2, 0.3], [0.1, 0.2, 0.3], [0.5, 0.5, 0.5])
    assert r.r_squared == 0 and r.degenerate
    r = fit_mean_model([0.1, 0.2, 0.3, 0.4], [0.4, 0.1, 0.3, 0.2], [0.5] * 4)
    assert r.r_squared == 0 and r.degenerate
    r = fit_degree_model([5, 5, 5], [0.1, 0.2, 0.3])
    assert r.r_squared == 0 and r.degenerate
