"""Symmetric two-player matrix games and the decaying trend payoff matrix."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Game",
    "TrendParams",
    "prisoners_dilemma",
    "stag_hunt",
    "chicken",
    "rps",
    "is_zero_sum",
    "is_strictly_positive",
    "expected_payoff",
    "trend_factor",
    "trend_matrix",
]

ZERO_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Game:
    """Row-player payoff matrix ``A`` of a symmetric game."""

    A: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        a = np.array(self.A, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"payoff matrix must be square, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("payoff matrix entries must be finite")
        a.flags.writeable = False
        object.__setattr__(self, "A", a)

    @property
    def m(self) -> int:
        return self.A.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Game):
            return NotImplemented
        return np.array_equal(self.A, other.A)

    def __hash__(self):
        return hash(self.A.tobytes())

    def __repr__(self):
        return f"Game({self.name!r}, A={self.A.tolist()})"


def prisoners_dilemma(R: float, S: float, T: float, P: float) -> Game:
    """``[[R, S], [T, P]]``; requires ``T > R > P > S``."""
    for lhs, rhs, label in ((T, R, "T > R"), (R, P, "R > P"), (P, S, "P > S")):
        if not lhs > rhs:
            raise ValueError(f"prisoner's dilemma requires T > R > P > S: {label} violated")
    return Game([[R, S], [T, P]], name="prisoners_dilemma")


def stag_hunt(hare: float = 2.0) -> Game:
    """Bistable stag hunt ``[[2, -1], [-1, hare]]``.

    ``hare=1`` gives the variant whose bilinear forms are ``3y - 1``,
    ``1 - 2y`` and ``1 - 2y - 2z + 5yz``.
    """
    return Game([[2.0, -1.0], [-1.0, hare]], name="stag_hunt")


def chicken() -> Game:
    """Strategy 1 is swerve, strategy 2 is don't swerve."""
    return Game([[0.0, -1.0], [1.0, -10.0]], name="chicken")


def rps(a: float = 0.0) -> Game:
    """Rock-paper-scissors with win payoff ``1 + a``; zero-sum at ``a = 0``."""
    w = 1.0 + a
    return Game([[0.0, -1.0, w], [w, 0.0, -1.0], [-1.0, w, 0.0]], name="rps")


def is_zero_sum(g: Game, tol: float = ZERO_SUM_TOL) -> bool:
    return bool(np.all(np.abs(g.A + g.A.T) <= tol))


def is_strictly_positive(g: Game) -> bool:
    return bool(np.all(g.A > 0))


def expected_payoff(g: Game, x, y) -> float:
    """``<x, A y>``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (g.m,) or y.shape != (g.m,):
        raise ValueError(f"strategies must have length {g.m}, got {x.shape} and {y.shape}")
    return float(x @ g.A @ y)


@dataclass(frozen=True)
class TrendParams:
    """Payoffs of the two-strategy trend game (strategy 2 is in-trend).

    Off-diagonal and in-trend entries move from ``S, T, P`` toward
    ``S0, T0, P0`` as the adopter's elapsed time grows. ``exponent_sign``
    picks ``beta**elapsed`` ("decay") or ``beta**-elapsed`` ("literal").
    """

    R: float
    S: float
    T: float
    P: float
    beta: float
    S0: float = 0.0
    T0: float = 0.0
    P0: float = 0.0
    exponent_sign: str = field(default="decay")

    def __post_init__(self):
        if not self.T > self.R:
            raise ValueError("trend game requires T > R")
        if not self.P > self.S:
            raise ValueError("trend game requires P > S")
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if self.exponent_sign not in ("decay", "literal"):
            raise ValueError("exponent_sign must be 'decay' or 'literal'")


def trend_factor(p: TrendParams, elapsed):
    """Weight still on the starting payoffs after ``elapsed`` steps in-trend."""
    elapsed = np.asarray(elapsed, dtype=float)
    sign = 1.0 if p.exponent_sign == "decay" else -1.0
    return np.power(p.beta, sign * elapsed)


def trend_matrix(p: TrendParams, t: float, tau_i: float) -> Game:
    """Payoff matrix of a player who adopted at ``tau_i``, evaluated at ``t``."""
    if t < tau_i:
        raise ValueError(f"t={t} precedes adoption time tau_i={tau_i}")
    f = float(trend_factor(p, t - tau_i))
    return Game(
        [
            [p.R, p.S0 - (p.S0 - p.S) * f],
            [p.T0 - (p.T0 - p.T) * f, p.P0 - (p.P0 - p.P) * f],
        ],
        name="trend",
    )
