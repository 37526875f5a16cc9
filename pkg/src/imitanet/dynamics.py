"""Discrete-time proportional imitation on a network.

Each player ``i`` holds a mixed strategy ``x[i]`` and earns the summed
bilinear payoff against its neighbours. Players move toward neighbours that
out-earn them, in proportion to the weighted payoff surplus::

    x[i] <- x[i] + alpha * sum_j kappa[i, j] * (x[j] - x[i])
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .games import Game
from .network import Network

__all__ = [
    "PAYOFF_TOL",
    "NumericFailure",
    "SimConfig",
    "ImitationGraph",
    "Trajectory",
    "as_profile",
    "payoffs",
    "s_values",
    "kappa_matrix",
    "step",
    "imitation_graph",
    "maximal_set",
    "q_matrix",
    "run",
    "diameter",
    "consensus_check",
]

PAYOFF_TOL = 1e-12
SIMPLEX_TOL = 1e-9
CLEAN_TOL = 1e-12


class NumericFailure(RuntimeError):
    """A strategy left the simplex by more than rounding error."""


@dataclass(frozen=True)
class SimConfig:
    alpha: float = 0.1
    delta: float = 0.0
    horizon: int = 10_000
    consensus_tol: float = 1e-6
    ig_window: int = 100
    conv_tol: float = 1e-12
    conv_window: int = 10
    stop_at_consensus: bool = False
    record: bool = True

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")


def as_profile(x, m: int | None = None, n: int | None = None) -> np.ndarray:
    """Validate and copy a strategy profile (one simplex point per row)."""
    x = np.array(x, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"profile must be 2-D (players x strategies), got shape {x.shape}")
    if m is not None and x.shape[1] != m:
        raise ValueError(f"profile has {x.shape[1]} strategies, game has {m}")
    if n is not None and x.shape[0] != n:
        raise ValueError(f"profile has {x.shape[0]} players, network has {n}")
    if np.any(x < -CLEAN_TOL) or np.any(np.abs(x.sum(axis=1) - 1) > SIMPLEX_TOL):
        raise ValueError("every profile row must be a point of the unit simplex")
    return x


def _check(net: Network, g: Game, x) -> np.ndarray:
    return as_profile(x, m=g.m, n=net.n)


def _payoffs(adj: np.ndarray, A: np.ndarray, x: np.ndarray) -> np.ndarray:
    pair = x @ A @ x.T
    return np.where(adj, pair, 0.0).sum(axis=1)


def _surplus(p: np.ndarray, w: np.ndarray, delta: float) -> np.ndarray:
    """``w_ij * floor_delta(P_j - P_i)``; gaps not exceeding the threshold count as zero."""
    gap = p[None, :] - p[:, None]
    thr = max(delta, PAYOFF_TOL)
    return np.where(gap > thr, gap, 0.0) * w


def _kappa(surplus: np.ndarray):
    s = surplus.sum(axis=1)
    k = np.zeros_like(surplus)
    active = s > 0
    k[active] = surplus[active] / s[active, None]
    return k, s


def payoffs(net: Network, g: Game, x) -> np.ndarray:
    """Total payoff of each player summed over its neighbours."""
    x = _check(net, g, x)
    return _payoffs(net.adjacency, g.A, x)


def s_values(net: Network, g: Game, x, delta: float = 0.0) -> np.ndarray:
    p = payoffs(net, g, x)
    return _surplus(p, net.weights, delta).sum(axis=1)


def kappa_matrix(net: Network, g: Game, x, delta: float = 0.0) -> np.ndarray:
    """Imitation weights; row ``i`` sums to 1 when player ``i`` has a better neighbour, else 0."""
    p = payoffs(net, g, x)
    return _kappa(_surplus(p, net.weights, delta))[0]


def _clean(x: np.ndarray) -> np.ndarray:
    if np.any(x < -CLEAN_TOL):
        raise NumericFailure(f"strategy component {x.min():.3e} below simplex")
    x = np.maximum(x, 0.0)
    return x / x.sum(axis=1, keepdims=True)


def _update(x: np.ndarray, k: np.ndarray, alpha: float) -> np.ndarray:
    # rows with nobody to imitate stay bit-for-bit unchanged
    rows = k.sum(axis=1)
    active = rows > 0
    y = x.copy()
    f = k[active] @ x - rows[active, None] * x[active]
    y[active] = _clean(x[active] + alpha * f)
    return y


def step(net: Network, g: Game, x, cfg: SimConfig) -> np.ndarray:
    """One synchronous imitation update."""
    x = _check(net, g, x)
    k = kappa_matrix(net, g, x, cfg.delta)
    return _update(x, k, cfg.alpha)


# -- imitation graph --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ImitationGraph:
    """Directed graph with ``i -> j`` when neighbour ``j`` strictly out-earns ``i``.

    ``order`` lists vertices by ascending payoff (ties by index), so every
    edge points forward and the last vertices are the maximal ones.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    payoffs: np.ndarray
    order: tuple[int, ...]

    @property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges:
            a[i, j] = True
        return a

    def out_degree(self) -> np.ndarray:
        d = np.zeros(self.n, dtype=int)
        for i, _ in self.edges:
            d[i] += 1
        return d

    def successors(self, i: int) -> list[int]:
        return [j for a, j in self.edges if a == i]

    def same_as(self, other: "ImitationGraph") -> bool:
        return self.n == other.n and self.edges == other.edges

    def to_dict(self, t: int | None = None) -> dict:
        """JSON-ready snapshot with 1-based vertex labels."""
        d = {
            "edges": [[i + 1, j + 1] for i, j in self.edges],
            "order": [v + 1 for v in self.order],
        }
        if t is not None:
            d = {"t": int(t), **d}
        return d


def _order(p: np.ndarray) -> tuple[int, ...]:
    return tuple(int(v) for v in np.argsort(p, kind="stable"))


def _ig_from_payoffs(adj: np.ndarray, p: np.ndarray) -> ImitationGraph:
    gap = p[None, :] - p[:, None]
    ii, jj = np.nonzero(adj & (gap > PAYOFF_TOL))
    edges = tuple(sorted(zip(ii.tolist(), jj.tolist())))
    p = p.copy()
    p.flags.writeable = False
    return ImitationGraph(len(p), edges, p, _order(p))


def imitation_graph(net: Network, g: Game, x) -> ImitationGraph:
    return _ig_from_payoffs(net.adjacency, payoffs(net, g, x))


def maximal_set(ig: ImitationGraph) -> list[int]:
    """Vertices that imitate nobody (out-degree zero)."""
    return [int(v) for v in np.flatnonzero(ig.out_degree() == 0)]


def q_matrix(ig: ImitationGraph, kappa, alpha: float, ordered: bool = False) -> np.ndarray:
    """Row-stochastic one-step matrix ``diag((1-a) I_r, I_{n-r}) + a K``.

    With ``ordered=True`` rows and columns follow ``ig.order`` and the result
    is upper triangular; otherwise original vertex indices are kept.
    """
    kappa = np.asarray(kappa, dtype=float)
    n = ig.n
    if kappa.shape != (n, n):
        raise ValueError(f"kappa must be {n}x{n}")
    if np.any((kappa > 0) & ~ig.adjacency):
        raise ValueError("kappa has weight on a pair that is not an imitation edge")
    perm = np.array(ig.order)
    kp = kappa[np.ix_(perm, perm)]
    active = kp.sum(axis=1) > 0
    q = np.diag(np.where(active, 1.0 - alpha, 1.0)) + alpha * kp
    for r in np.flatnonzero(active):
        last = np.flatnonzero(q[r])[-1]
        q[r, last] += 1.0 - q[r].sum()
    if ordered:
        return q
    out = np.empty_like(q)
    out[np.ix_(perm, perm)] = q
    return out


# -- runs --------------------------------------------------------------------

def diameter(x) -> float:
    """Largest L-infinity distance between two players' strategies."""
    x = np.asarray(x, dtype=float)
    return float(np.max(x.max(axis=0) - x.min(axis=0)))


def consensus_check(x, tol: float) -> bool:
    return diameter(x) < tol


@dataclass
class Trajectory:
    """Result of :func:`run`.

    ``profiles`` and ``payoffs`` hold every step when the run was recorded;
    hull bounds and imitation-graph changes are always kept.
    """

    final: np.ndarray
    steps: int
    converged: bool
    ig_converged: bool
    consensus: bool
    hull_min: np.ndarray
    hull_max: np.ndarray
    ig_changes: list[tuple[int, ImitationGraph]]
    profiles: np.ndarray | None = None
    payoffs: np.ndarray | None = None
    final_payoffs: np.ndarray | None = None
    max_hull_violation: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def final_ig(self) -> ImitationGraph:
        return self.ig_changes[-1][1]

    @property
    def diameter(self) -> float:
        return diameter(self.final)

    def ig_at(self, t: int) -> ImitationGraph:
        current = self.ig_changes[0][1]
        for s, ig in self.ig_changes:
            if s > t:
                break
            current = ig
        return current

    def ig_jsonl(self) -> str:
        return "".join(json.dumps(ig.to_dict(t)) + "\n" for t, ig in self.ig_changes)


def _hull_violation(lo_prev, hi_prev, lo, hi) -> float:
    """Amount by which the per-coordinate hull grew (0 when nested)."""
    return float(max(np.max(lo_prev - lo), np.max(hi - hi_prev), 0.0))


def run(net: Network, g: Game, x0, cfg: SimConfig) -> Trajectory:
    """Iterate the update until convergence or ``cfg.horizon`` steps.

    Convergence means the largest strategy change stayed below
    ``cfg.conv_tol`` for ``cfg.conv_window`` consecutive steps, or nobody
    had a better neighbour (an exact fixed point).
    """
    x = _check(net, g, x0)
    adj, w, A = net.adjacency, net.weights, g.A
    p = _payoffs(adj, A, x)
    ig_adj = adj & (p[None, :] - p[:, None] > PAYOFF_TOL)
    ig_changes = [(0, _ig_from_payoffs(adj, p))]
    last_ig_change = 0

    lo, hi = [x.min(axis=0)], [x.max(axis=0)]
    profiles = [x] if cfg.record else None
    pays = [p] if cfg.record else None
    quiet, converged, worst = 0, False, 0.0
    t = 0
    while t < cfg.horizon:
        k, s = _kappa(_surplus(p, w, cfg.delta))
        if not np.any(s > 0):
            converged = True
            break
        x_new = _update(x, k, cfg.alpha)
        change = float(np.max(np.abs(x_new - x)))
        x = x_new
        t += 1
        p = _payoffs(adj, A, x)
        new_ig = adj & (p[None, :] - p[:, None] > PAYOFF_TOL)
        if not np.array_equal(new_ig, ig_adj):
            ig_adj = new_ig
            ig_changes.append((t, _ig_from_payoffs(adj, p)))
            last_ig_change = t
        mn, mx = x.min(axis=0), x.max(axis=0)
        worst = max(worst, _hull_violation(lo[-1], hi[-1], mn, mx))
        lo.append(mn)
        hi.append(mx)
        if cfg.record:
            profiles.append(x)
            pays.append(p)
        quiet = quiet + 1 if change < cfg.conv_tol else 0
        if quiet >= cfg.conv_window:
            converged = True
            break
        if cfg.stop_at_consensus and diameter(x) < cfg.consensus_tol:
            break

    return Trajectory(
        final=x,
        steps=t,
        converged=converged,
        ig_converged=converged or (t - last_ig_change) >= cfg.ig_window,
        consensus=consensus_check(x, cfg.consensus_tol),
        hull_min=np.array(lo),
        hull_max=np.array(hi),
        ig_changes=ig_changes,
        profiles=np.array(profiles) if cfg.record else None,
        payoffs=np.array(pays) if cfg.record else None,
        final_payoffs=p,
        max_hull_violation=worst,
    )


def trajectory_rows(traj: Trajectory) -> Iterable[list]:
    """Rows ``t, player, strategy_0.., payoff`` for CSV export (recorded runs only)."""
    if traj.profiles is None:
        raise ValueError("trajectory was not recorded")
    for t, (xt, pt) in enumerate(zip(traj.profiles, traj.payoffs)):
        for i in range(xt.shape[0]):
            yield [t, i + 1, *xt[i].tolist(), float(pt[i])]
