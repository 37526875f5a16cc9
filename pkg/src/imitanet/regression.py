"""Least-squares fits of trend saturation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SATURATED = 1 - 1e-9


@dataclass
class RegressionResult:
    kind: str
    coefficients: dict[str, float]
    r_squared: float
    residuals: np.ndarray
    n_obs: int
    degenerate: bool = False
    notes: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "coefficients": self.coefficients,
            "r_squared": self.r_squared,
            "n_obs": self.n_obs,
            "degenerate": self.degenerate,
            **self.notes,
        }


def _ols(X: np.ndarray, y: np.ndarray):
    """Coefficients, residuals and ``1 - SSR/SST`` (0 when y is constant)."""
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    res = y - X @ coef
    sst = float(((y - y.mean()) ** 2).sum())
    if np.ptp(y) == 0 or sst == 0:
        return coef, res, 0.0, True
    r2 = 1 - float(res @ res) / sst
    return coef, res, min(max(r2, 0.0), 1.0), False


def fit_degree_model(degree, pi) -> RegressionResult:
    """``pi ~ 1 - exp(a0 - a d)`` via least squares on ``log(1 - pi)``.

    Rows with ``pi >= 1 - 1e-9`` have no finite log and are dropped.
    """
    d = np.asarray(degree, float)
    pi = np.asarray(pi, float)
    keep = pi < SATURATED
    notes = {"excluded_saturated": int((~keep).sum())}
    if keep.sum() < 2 or np.ptp(d[keep]) == 0:
        return RegressionResult("exp-saturation", {"alpha0": 0.0, "alpha": 0.0}, 0.0,
                                np.zeros(int(keep.sum())), int(keep.sum()), True, notes)
    y = np.log1p(-pi[keep])
    X = np.column_stack([np.ones(keep.sum()), d[keep]])
    coef, res, r2, degen = _ols(X, y)
    return RegressionResult("exp-saturation", {"alpha0": float(coef[0]), "alpha": float(-coef[1])},
                            r2, res, int(keep.sum()), degen, notes)


def fit_mean_model(beta, alpha, mean_pi) -> RegressionResult:
    """``mean_pi ~ c0 + c_beta * beta + c_alpha * alpha``."""
    b = np.asarray(beta, float)
    a = np.asarray(alpha, float)
    y = np.asarray(mean_pi, float)
    X = np.column_stack([np.ones_like(b), b, a])
    if len(y) < 3 or np.linalg.matrix_rank(X) < 3:
        return RegressionResult("linear-mean", {"c0": float(y.mean()) if len(y) else 0.0, "beta": 0.0, "alpha": 0.0},
                                0.0, y - (y.mean() if len(y) else 0.0), len(y), True)
    coef, res, r2, degen = _ols(X, y)
    return RegressionResult("linear-mean", {"c0": float(coef[0]), "beta": float(coef[1]), "alpha": float(coef[2])},
                            r2, res, len(y), degen)
