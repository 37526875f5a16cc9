"""Payoff-driven edge deletion and addition between strategy epochs."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import PAYOFF_TOL, SimConfig, Trajectory, _check, diameter, run
from .games import Game
from .network import Network

__all__ = [
    "EvolutionConfig",
    "CoevolutionTrace",
    "edge_values",
    "edge_delta",
    "epoch_changes",
    "topology_epoch",
    "is_pairwise_stable",
    "pd_link_threshold",
    "pd_link_condition",
    "coevolve",
    "component_diameters",
]


@dataclass(frozen=True)
class EvolutionConfig:
    tau: int = 25
    max_epochs: int = 200

    def __post_init__(self):
        if self.tau < 1:
            raise ValueError("tau must be >= 1")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")


def edge_values(g: Game, x) -> np.ndarray:
    """``V[i, j] = <x_i, A x_j>``: what player ``i`` earns from a link to ``j``."""
    x = np.asarray(x, dtype=float)
    return x @ g.A @ x.T


def edge_delta(net: Network, g: Game, x, i: int, j: int) -> tuple[float, float]:
    """Payoff change for ``i`` and ``j`` if edge ``{i, j}`` were toggled."""
    if i == j:
        raise ValueError("edge_delta needs two distinct players")
    x = _check(net, g, x)
    vi = float(x[i] @ g.A @ x[j])
    vj = float(x[j] @ g.A @ x[i])
    if net.has_edge(i, j):
        return -vi, -vj
    return vi, vj


def epoch_changes(net: Network, g: Game, x):
    """Edges to delete and pairs to link, judged on one payoff snapshot.

    A present edge goes when either endpoint would not lose by dropping it
    (zero-value edges included). An absent pair is linked only when both
    endpoints strictly gain. Pairs are scanned in lexicographic order.
    """
    x = _check(net, g, x)
    v = edge_values(g, x)
    adj = net.adjacency
    remove, add = [], []
    for i in range(net.n):
        for j in range(i + 1, net.n):
            if adj[i, j]:
                if v[i, j] <= PAYOFF_TOL or v[j, i] <= PAYOFF_TOL:
                    remove.append((i, j))
            elif v[i, j] > PAYOFF_TOL and v[j, i] > PAYOFF_TOL:
                add.append((i, j))
    return remove, add


def topology_epoch(net: Network, g: Game, x) -> Network:
    remove, add = epoch_changes(net, g, x)
    if not remove and not add:
        return net
    return net.with_edges(remove=remove, add=add)


def is_pairwise_stable(net: Network, g: Game, x) -> bool:
    remove, add = epoch_changes(net, g, x)
    return not remove and not add


def pd_link_threshold(R, S, T, P, x_i: float) -> float:
    """Least cooperation level of ``j`` that makes a link worth it to ``i``.

    Cooperation probabilities are the weight on strategy 1. Raises
    ``ZeroDivisionError`` where the denominator vanishes.
    """
    den = (P + R - S - T) * x_i + (T - P)
    if den == 0:
        raise ZeroDivisionError(f"link threshold undefined at x_i={x_i}")
    return ((P - S) * x_i - P) / den


def pd_link_condition(R, S, T, P, x_i: float, x_j: float) -> bool:
    if not T > R > P > S:
        raise ValueError("prisoner's dilemma requires T > R > P > S")
    return x_j > pd_link_threshold(R, S, T, P, x_i)


def component_diameters(net: Network, x) -> list[float]:
    x = np.asarray(x, dtype=float)
    return [diameter(x[c]) for c in net.components()]


@dataclass
class CoevolutionTrace:
    networks: list[Network]
    final: np.ndarray
    epochs: int
    stable: bool
    strategy_converged: bool
    steps: int
    hull_violation: float = 0.0
    epoch_runs: list[Trajectory] = field(default_factory=list, repr=False)

    @property
    def final_network(self) -> Network:
        return self.networks[-1]

    def manifest(self) -> list[dict]:
        return [
            {
                "epoch": e,
                "edges": net.num_edges,
                "component_sizes": [len(c) for c in net.components()],
                "stable": e > 0 and net == self.networks[e - 1],
            }
            for e, net in enumerate(self.networks)
        ]


def coevolve(
    net: Network,
    g: Game,
    x0,
    sim_cfg: SimConfig,
    evo_cfg: EvolutionConfig,
    keep_runs: bool = False,
) -> CoevolutionTrace:
    """Alternate ``tau`` strategy steps with one topology epoch.

    The epoch sees strategies after the coinciding strategy step. Stops once
    an epoch changes nothing and strategies have stopped moving, or after
    ``max_epochs``. ``networks[e]`` is the graph in force after epoch ``e``
    (``networks[0]`` is the input graph).
    """
    x = _check(net, g, x0)
    cfg = SimConfig(**{**sim_cfg.__dict__, "horizon": evo_cfg.tau, "stop_at_consensus": False})
    nets = [net]
    runs = []
    steps, stable, still, worst = 0, False, False, 0.0
    epoch = 0
    for epoch in range(1, evo_cfg.max_epochs + 1):
        tr = run(net, g, x, cfg)
        steps += tr.steps
        worst = max(worst, tr.max_hull_violation)
        x = tr.final
        still = tr.converged
        if keep_runs:
            runs.append(tr)
        new = topology_epoch(net, g, x)
        stable = new == net
        net = new
        nets.append(net)
        if stable and still:
            break
    return CoevolutionTrace(
        networks=nets,
        final=x,
        epochs=epoch,
        stable=stable,
        strategy_converged=still,
        steps=steps,
        hull_violation=worst,
        epoch_runs=runs,
    )
