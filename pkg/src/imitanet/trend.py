"""Trend (information cascade) dynamics.

Two strategies: 1 is the pre-trend behaviour, 2 is the trend. Seeds start
in-trend; everyone else starts out. Players imitate better-off neighbours
and can also revert to strategy 1 when that would pay more than what they
currently play. A player's own payoff matrix starts decaying from the step
they first put positive weight on the trend.

The state is tracked as ``y[i]``, the probability player ``i`` plays the
trend; the strategy profile is ``[1 - y, y]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import CLEAN_TOL, PAYOFF_TOL, NumericFailure
from .games import TrendParams, trend_factor
from .network import Network

__all__ = [
    "TrendConfig",
    "TrendState",
    "TrendTrace",
    "initial_state",
    "trend_payoffs",
    "trend_s_values",
    "trend_kappa",
    "trend_step",
    "run_trend",
    "spread_predicate",
    "complete_graph_corollary",
    "complete_graph_spread",
    "saturation",
    "t1_star",
    "t2_star",
    "reversal_time",
    "collapse_time",
    "run_trend_batch",
    "TrendBatch",
]


@dataclass(frozen=True)
class TrendConfig:
    params: TrendParams
    seeds: frozenset[int] = frozenset()
    alpha: float = 0.1
    self_weight: float = 1.0
    collapse_threshold: float = 1e-3
    horizon: int = 2000
    delta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "seeds", frozenset(int(s) for s in self.seeds))
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.self_weight < 0:
            raise ValueError("self_weight must be >= 0")
        if not 0 < self.collapse_threshold < 1:
            raise ValueError("collapse_threshold must lie in (0, 1)")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")


@dataclass
class TrendState:
    y: np.ndarray
    tau: np.ndarray
    t: int = 0

    @property
    def profile(self) -> np.ndarray:
        return np.column_stack([1.0 - self.y, self.y])

    def copy(self) -> "TrendState":
        return TrendState(self.y.copy(), self.tau.copy(), self.t)


def initial_state(net: Network, cfg: TrendConfig) -> TrendState:
    y = np.zeros(net.n)
    tau = np.full(net.n, np.inf)
    for s in cfg.seeds:
        if not 0 <= s < net.n:
            raise ValueError(f"seed {s} out of range")
        y[s] = 1.0
        tau[s] = 0.0
    return TrendState(y, tau, 0)


class TrendBatch:
    """Runs ``B`` independent trend simulations on one graph in lockstep.

    Arrays have shape ``(B, n)``. All members share the step counter.
    """

    def __init__(self, net: Network, cfg: TrendConfig):
        self.net = net
        self.cfg = cfg
        self.adj = net.adjacency.astype(float)
        i, j = np.nonzero(net.adjacency)
        self.src, self.dst = i, j
        self.w_e = net.weights[i, j]
        inc = np.zeros((len(i), net.n))
        inc[np.arange(len(i)), i] = 1.0
        self.inc = inc
        self.thr = max(cfg.delta, PAYOFF_TOL)

    def matrices(self, tau: np.ndarray, t: int):
        """Per-player entries ``(a12, a21, a22)``; ``a11 = R`` for everyone."""
        p = self.cfg.params
        elapsed = np.where(np.isfinite(tau), t - np.where(np.isfinite(tau), tau, 0.0), 0.0)
        f = trend_factor(p, elapsed)
        return p.S0 - (p.S0 - p.S) * f, p.T0 - (p.T0 - p.T) * f, p.P0 - (p.P0 - p.P) * f

    def payoffs(self, y: np.ndarray, tau: np.ndarray, t: int):
        """Current payoffs and the payoffs of reverting to strategy 1."""
        a12, a21, a22 = self.matrices(tau, t)
        R = self.cfg.params.R
        u = 1.0 - y
        nu = u @ self.adj
        ny = y @ self.adj
        revert = R * nu + a12 * ny
        current = u * revert + y * (a21 * nu + a22 * ny)
        return current, revert

    def surpluses(self, y, tau, t):
        pay, rev = self.payoffs(y, tau, t)
        gap = pay[:, self.dst] - pay[:, self.src]
        edge = np.where(gap > self.thr, gap, 0.0) * self.w_e
        back = rev - pay
        back = self.cfg.self_weight * np.where(back > self.thr, back, 0.0)
        return pay, back, edge

    def step(self, y: np.ndarray, tau: np.ndarray, t: int):
        """Return ``(y_next, tau_next, moved)``; ``moved`` flags members with any imitation."""
        _, back, edge = self.surpluses(y, tau, t)
        s = back + edge @ self.inc
        active = s > 0
        pull = (edge * (y[:, self.dst] - y[:, self.src])) @ self.inc - back * y
        drift = np.divide(pull, s, out=np.zeros_like(pull), where=active)
        y_new = y + self.cfg.alpha * drift
        if np.any(y_new < -CLEAN_TOL) or np.any(y_new > 1 + CLEAN_TOL):
            raise NumericFailure("trend probability left [0, 1]")
        y_new = np.clip(y_new, 0.0, 1.0)
        tau_new = np.where((y_new > 0) & ~np.isfinite(tau), t + 1.0, tau)
        return y_new, tau_new, active.any(axis=1)


def trend_payoffs(net: Network, cfg: TrendConfig, state: TrendState):
    pay, rev = TrendBatch(net, cfg).payoffs(state.y[None], state.tau[None], state.t)
    return pay[0], rev[0]


def trend_s_values(net: Network, cfg: TrendConfig, state: TrendState) -> np.ndarray:
    """Reversion surplus plus weighted surplus of better-off neighbours."""
    b = TrendBatch(net, cfg)
    _, back, edge = b.surpluses(state.y[None], state.tau[None], state.t)
    return (back + edge @ b.inc)[0]


def trend_kappa(net: Network, cfg: TrendConfig, state: TrendState):
    """``(kappa_0, kappa)``: weight on reverting and on each neighbour."""
    b = TrendBatch(net, cfg)
    _, back, edge = b.surpluses(state.y[None], state.tau[None], state.t)
    s = (back + edge @ b.inc)[0]
    k = np.zeros((net.n, net.n))
    k[b.src, b.dst] = edge[0]
    active = s > 0
    k0 = np.zeros(net.n)
    k0[active] = back[0, active] / s[active]
    k[active] /= s[active, None]
    return k0, k


def trend_step(net: Network, cfg: TrendConfig, state: TrendState) -> TrendState:
    y, tau, _ = TrendBatch(net, cfg).step(state.y[None], state.tau[None], state.t)
    return TrendState(y[0], tau[0], state.t + 1)


@dataclass
class TrendTrace:
    """Trajectory of one trend run.

    ``density[t, i]`` is player ``i``'s trend probability at step ``t``.
    """

    density: np.ndarray
    payoffs: np.ndarray
    tau: np.ndarray
    pi: np.ndarray
    collapse_time: int | None
    seeds: frozenset[int]
    meta: dict = field(default_factory=dict)

    @property
    def max_pi(self) -> float:
        return float(self.pi.max())

    @property
    def saturated(self) -> bool:
        return bool(np.all(np.isfinite(self.tau)))

    @property
    def spread(self) -> bool:
        others = [i for i in range(len(self.tau)) if i not in self.seeds]
        return bool(np.any(np.isfinite(self.tau[others])))

    def summary(self) -> dict:
        return {
            "max_pi": self.max_pi,
            "saturated": self.saturated,
            "spread": self.spread,
            "collapse_time": self.collapse_time,
            "steps": int(len(self.pi) - 1),
            "tau": {str(i + 1): (None if not np.isfinite(v) else int(v)) for i, v in enumerate(self.tau)},
        }


def collapse_time(density: np.ndarray, threshold: float) -> int | None:
    """First step at or after peak saturation where every trend probability is below ``threshold``."""
    if not np.any(density[0] > 0):
        return None
    pi = (density > 0).mean(axis=1)
    peak = int(np.argmax(pi))
    low = np.flatnonzero(density[peak:].max(axis=1) < threshold)
    return int(low[0] + peak) if low.size else None


def run_trend(net: Network, cfg: TrendConfig, stop_at_collapse: bool = False) -> TrendTrace:
    """Simulate up to ``cfg.horizon`` steps.

    Stops early when nobody imitates or reverts (an exact fixed point) or,
    with ``stop_at_collapse``, once every trend probability has dropped
    below ``cfg.collapse_threshold``.
    """
    b = TrendBatch(net, cfg)
    st = initial_state(net, cfg)
    y, tau = st.y[None], st.tau[None]
    started = bool(cfg.seeds)
    ys, ps = [y[0]], [b.payoffs(y, tau, 0)[0][0]]
    for t in range(cfg.horizon):
        y_new, tau, moved = b.step(y, tau, t)
        if not moved[0]:
            break
        y = y_new
        ys.append(y[0])
        ps.append(b.payoffs(y, tau, t + 1)[0][0])
        if stop_at_collapse and started and y.max() < cfg.collapse_threshold:
            break
    density = np.array(ys)
    return TrendTrace(
        density=density,
        payoffs=np.array(ps),
        tau=tau[0].copy(),
        pi=(density > 0).mean(axis=1),
        collapse_time=collapse_time(density, cfg.collapse_threshold),
        seeds=cfg.seeds,
    )


def run_trend_batch(net: Network, cfg: TrendConfig, seed_sets, stop_at_collapse: bool = True):
    """Max saturation proportion and adoption times for many seed sets at once."""
    b = TrendBatch(net, cfg)
    B = len(seed_sets)
    y = np.zeros((B, net.n))
    tau = np.full((B, net.n), np.inf)
    for r, seeds in enumerate(seed_sets):
        for s in seeds:
            y[r, s] = 1.0
            tau[r, s] = 0.0
    best = (y > 0).mean(axis=1)
    live = np.ones(B, dtype=bool)
    for t in range(cfg.horizon):
        y_new, tau_new, moved = b.step(y, tau, t)
        y = np.where(live[:, None], y_new, y)
        tau = np.where(live[:, None], tau_new, tau)
        best = np.maximum(best, (y > 0).mean(axis=1))
        live &= moved
        if stop_at_collapse:
            live &= y.max(axis=1) >= cfg.collapse_threshold
        if not live.any():
            break
    return best, tau


# -- spread conditions and closed forms --------------------------------------

def spread_predicate(net: Network, cfg: TrendConfig) -> bool:
    """Does some non-seed strictly out-earned by a seed neighbour exist at ``t = 0``?"""
    p = cfg.params
    seeds = cfg.seeds
    adj = net.adjacency
    seed_mask = np.zeros(net.n, dtype=bool)
    seed_mask[list(seeds)] = True
    n_seed = adj[:, seed_mask].sum(axis=1)
    n_other = adj.sum(axis=1) - n_seed
    for i in np.flatnonzero(~seed_mask):
        lhs = n_seed[i] * p.S + n_other[i] * p.R
        for j in np.flatnonzero(adj[i] & seed_mask):
            if lhs < n_seed[j] * p.P + n_other[j] * p.T - max(cfg.delta, PAYOFF_TOL):
                return True
    return False


def complete_graph_corollary(p: TrendParams, n: int, k: int) -> bool:
    """``(n-2) R + S < (n-k) P + (k-1) T`` as printed for complete graphs."""
    return (n - 2) * p.R + p.S < (n - k) * p.P + (k - 1) * p.T


def complete_graph_spread(p: TrendParams, n: int, k: int) -> bool:
    """Neighbour-count condition specialised to ``k`` seeds on ``K_n``."""
    return k * p.S + (n - 1 - k) * p.R < (k - 1) * p.P + (n - k) * p.T


def saturation(trace: TrendTrace) -> dict:
    return {"pi_of_t": trace.pi, "max_pi": trace.max_pi, "saturated": trace.saturated}


def t1_star(p: TrendParams, n: int) -> float:
    """Closed-form end of mimicry of a single seed on ``K_n`` (zero limits)."""
    if n <= 2:
        raise ValueError("t1_star needs n > 2")
    if p.beta == 1:
        raise ValueError("t1_star is undefined for beta = 1 (log beta = 0)")
    R, S, T, P = p.R, p.S, p.T, p.P
    den = ((n - 1) * S - T) * T + P * (T - S)
    if den == 0:
        raise ValueError("t1_star log argument has a zero denominator")
    arg = (n - 2) * P * R / den
    if arg <= 0:
        raise ValueError(f"t1_star log argument {arg} is not positive")
    return 1 - math.log(arg) / math.log(p.beta)


def t2_star(p: TrendParams, n: int, alpha: float) -> float:
    """Closed-form start of collapse following ``t1_star``."""
    t1 = t1_star(p, n)
    R, S, T, P = p.R, p.S, p.T, p.P
    g = (1 - alpha) ** t1
    arg = p.beta * (g * (S + T - P) + P - S) / (g * R)
    if arg <= 0:
        raise ValueError(f"t2_star log argument {arg} is not positive")
    return math.log(arg) / math.log(p.beta)


def reversal_time(trace: TrendTrace, seed: int) -> int | None:
    """First step at which some neighbour out-earns the seed."""
    pay = trace.payoffs
    for t in range(pay.shape[0]):
        others = np.delete(pay[t], seed)
        if np.any(others > pay[t, seed] + PAYOFF_TOL):
            return t
    return None
