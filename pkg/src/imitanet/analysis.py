"""Consensus diagnostics: hull bounds, the max-min sufficient condition,
stochastic-matrix product bounds, an energy diagnostic and leader partitions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import binom

from .dynamics import ImitationGraph, imitation_graph, kappa_matrix, _check
from .games import Game
from .network import Network

__all__ = [
    "HullBounds",
    "hull_bounds",
    "MaxMinRecord",
    "max_min_condition",
    "reaches_maximal",
    "symbolic_reduction",
    "condition_boundary",
    "product_decay_bound",
    "binomial_decay_bound",
    "ProductDecayReport",
    "verify_product_decay",
    "random_nilpotent_family",
    "energy",
    "leader_partition",
]


@dataclass(frozen=True)
class HullBounds:
    lo: np.ndarray
    hi: np.ndarray

    def contains(self, other: "HullBounds", tol: float = 1e-12) -> bool:
        return bool(np.all(other.lo >= self.lo - tol) and np.all(other.hi <= self.hi + tol))


def hull_bounds(x) -> HullBounds:
    x = np.asarray(x, dtype=float)
    return HullBounds(x.min(axis=0), x.max(axis=0))


# -- max-min sufficient condition ---------------------------------------------

@dataclass
class MaxMinRecord:
    """Outcome of the max-min test.

    ``lhs`` is the worst payoff bound over maximal players, ``rhs`` the best
    payoff bound over everyone else. The ``*_at`` fields name the players and
    hull generators (player indices) attaining them.
    """

    lhs: float
    rhs: float
    holds: bool
    singleton: bool
    reachable: bool
    maximal_set: list[int]
    lhs_at: tuple[int, int] | None = None
    rhs_at: tuple[int, int, int] | None = None
    rhs_hull: str = "all"

    @property
    def sufficient(self) -> bool:
        return self.holds and self.singleton and self.reachable

    def to_dict(self) -> dict:
        def lab(t):
            return None if t is None else [v + 1 for v in t]

        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "singleton": self.singleton,
            "reachable": self.reachable,
            "sufficient": self.sufficient,
            "maximal_set": [v + 1 for v in self.maximal_set],
            "lhs_at": lab(self.lhs_at),
            "rhs_at": lab(self.rhs_at),
            "rhs_hull": self.rhs_hull,
        }


def _generators(x: np.ndarray, players) -> list[int]:
    """One representative player per distinct strategy."""
    seen, reps = [], []
    for i in players:
        if not any(np.array_equal(x[i], x[j]) for j in seen):
            seen.append(i)
            reps.append(int(i))
    return reps


def reaches_maximal(ig: ImitationGraph, targets) -> bool:
    """True iff every vertex has a directed path into ``targets``."""
    targets = set(targets)
    ok = np.zeros(ig.n, dtype=bool)
    ok[list(targets)] = True
    succ = [[] for _ in range(ig.n)]
    for i, j in ig.edges:
        succ[i].append(j)
    # edges point up the order, so one reverse sweep settles reachability
    for v in reversed(ig.order):
        if not ok[v]:
            ok[v] = any(ok[u] for u in succ[v])
    return bool(ok.all())


def max_min_condition(
    net: Network,
    g: Game,
    x,
    maximal_set,
    rhs_hull: str = "all",
) -> MaxMinRecord:
    """Check the max-min payoff separation for a candidate maximal set.

    Both optimisations range over the convex hull of the current strategies.
    A linear (or bilinear) form over a polytope (or product of polytopes) is
    extremal at vertices, so enumerating the players' strategies as hull
    generators is exact. ``rhs_hull="non_maximal"`` restricts the right-hand
    hull to strategies of players outside the maximal set.
    """
    x = _check(net, g, x)
    vstar = sorted(int(v) for v in maximal_set)
    if not vstar:
        raise ValueError("maximal set is empty")
    if rhs_hull not in ("all", "non_maximal"):
        raise ValueError("rhs_hull must be 'all' or 'non_maximal'")
    A = g.A
    deg = net.degrees
    others = [j for j in range(net.n) if j not in set(vstar)]
    gens = _generators(x, range(net.n))

    lhs, lhs_at = np.inf, None
    for i in vstar:
        for k in gens:
            v = deg[i] * float(x[i] @ A @ x[k])
            if v < lhs:
                lhs, lhs_at = v, (i, k)

    rhs, rhs_at = -np.inf, None
    if others:
        rgens = gens if rhs_hull == "all" else _generators(x, others)
        fmax, fat = -np.inf, None
        for a in rgens:
            for b in rgens:
                v = float(x[a] @ A @ x[b])
                if v > fmax:
                    fmax, fat = v, (a, b)
        for j in others:
            v = deg[j] * fmax
            if v > rhs:
                rhs, rhs_at = v, (j, *fat)

    star = x[vstar]
    singleton = bool(np.max(star.max(axis=0) - star.min(axis=0)) <= 1e-12)
    reachable = reaches_maximal(imitation_graph(net, g, x), vstar)
    return MaxMinRecord(
        lhs=float(lhs),
        rhs=float(rhs),
        holds=bool(lhs > rhs),
        singleton=singleton,
        reachable=reachable,
        maximal_set=vstar,
        lhs_at=lhs_at,
        rhs_at=rhs_at,
        rhs_hull=rhs_hull,
    )


def symbolic_reduction(net: Network, g: Game, record: MaxMinRecord, sym_profile, symbol):
    """Closed forms of the active lhs/rhs terms and the boundary they imply.

    ``sym_profile`` is a sympy version of the profile used for ``record``
    (rows may depend on ``symbol``). Returns ``(lhs_expr, rhs_expr, roots)``.
    """
    import sympy as sp

    A = sp.Matrix(g.A.tolist()).applyfunc(sp.nsimplify)
    rows = [sp.Matrix(1, g.m, list(r)) for r in sym_profile]
    deg = net.degrees

    def form(a, b):
        return (rows[a] * A * rows[b].T)[0, 0]

    i, k = record.lhs_at
    lhs = sp.factor(sp.expand(int(deg[i]) * form(i, k)))
    if record.rhs_at is None:
        return lhs, -sp.oo, []
    j, a, b = record.rhs_at
    rhs = sp.factor(sp.expand(int(deg[j]) * form(a, b)))
    roots = sp.solve(sp.Eq(lhs, rhs), symbol)
    return lhs, rhs, roots


def condition_boundary(net, g, family, maximal_set, lo, hi, rhs_hull="all", xtol=1e-13):
    """Parameter value in ``[lo, hi]`` where ``lhs - rhs`` changes sign.

    ``family(a)`` must return a profile; the margin must change sign on the
    bracket.
    """
    from scipy.optimize import brentq

    def margin(a):
        r = max_min_condition(net, g, family(a), maximal_set, rhs_hull=rhs_hull)
        return r.lhs - r.rhs

    return brentq(margin, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps)


# -- matrix-product machinery ---------------------------------------------

def product_decay_bound(alpha: float, n: int, T: int) -> float:
    """``(1 - alpha)**(T - n) / (1 - n/T)**T``."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if T <= n:
        raise ValueError(f"need T > n, got T={T}, n={n}")
    return (1 - alpha) ** (T - n) / (1 - n / T) ** T


def binomial_decay_bound(alpha: float, n: int, T: int) -> float:
    """``sum_{k<=n-2} C(T,k) a^k (1-a)^(T-k)``: exact worst case for ``n x n`` chains.

    Products of ``n - 1`` strictly upper-triangular ``(n-1) x (n-1)``
    matrices vanish, and the all-superdiagonal family attains this value.
    """
    if n < 2:
        return 0.0
    return float(binom.cdf(n - 2, T, alpha))


@dataclass
class ProductDecayReport:
    norm: float
    bound: float
    binomial_bound: float
    applicable: bool
    nilpotent: bool
    n: int
    T: int
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        """Bound respected (checked only when ``alpha > n / T``) and short products vanish."""
        return self.nilpotent and (not self.applicable or self.norm <= self.bound)


def _validate_family(family) -> list[np.ndarray]:
    mats = [np.asarray(k, dtype=float) for k in family]
    if not mats:
        raise ValueError("empty family")
    size = mats[0].shape[0]
    for t, k in enumerate(mats):
        if k.shape != (size, size):
            raise ValueError(f"matrix {t} has shape {k.shape}, expected {(size, size)}")
        if np.any(k < 0):
            raise ValueError(f"matrix {t} has negative entries")
        if np.any(k.sum(axis=1) > 1 + 1e-12):
            raise ValueError(f"matrix {t} is not substochastic")
        if np.any(np.tril(k) != 0):
            raise ValueError(f"matrix {t} is not strictly upper triangular")
    return mats


def verify_product_decay(family, alpha: float, T: int | None = None) -> ProductDecayReport:
    """Check ``||prod((1-a) I + a K_t)||_inf`` against the decay bounds.

    ``family`` holds the ``(n-1) x (n-1)`` leading blocks ``K_t``; the first
    ``T`` are used. Every window of ``n`` consecutive bare blocks must
    multiply to the exact zero matrix.
    """
    mats = _validate_family(family)
    T = len(mats) if T is None else int(T)
    if T > len(mats):
        raise ValueError(f"family has {len(mats)} matrices, need T={T}")
    size = mats[0].shape[0]
    n = size + 1
    eye = np.eye(size)
    prod = eye.copy()
    for k in mats[:T]:
        prod = prod @ ((1 - alpha) * eye + alpha * k)
    norm = float(np.abs(prod).sum(axis=1).max())

    nilpotent = True
    for s in range(0, max(T - n, 0) + 1):
        bare = eye.copy()
        for k in mats[s : s + n]:
            bare = bare @ k
        if len(mats[s : s + n]) == n and np.any(bare != 0):
            nilpotent = False
            break

    applicable = alpha > n / T and T > n
    bound = product_decay_bound(alpha, n, T) if T > n else np.inf
    return ProductDecayReport(
        norm=norm,
        bound=bound,
        binomial_bound=binomial_decay_bound(alpha, n, T),
        applicable=applicable,
        nilpotent=nilpotent,
        n=n,
        T=T,
    )


def random_nilpotent_family(rng: np.random.Generator, n: int, T: int) -> list[np.ndarray]:
    """Leading blocks of ``T`` random imitation matrices on ``n`` ordered players.

    Row ``i < n-1`` of the full matrix is a Dirichlet draw over columns
    ``i+1..n-1``; the last player imitates nobody.
    """
    fam = []
    for _ in range(T):
        k = np.zeros((n, n))
        for i in range(n - 1):
            k[i, i + 1 :] = rng.dirichlet(np.ones(n - 1 - i))
        fam.append(k[: n - 1, : n - 1])
    return fam


# -- diagnostics --------------------------------------------------------------

def energy(net: Network, g: Game, x, delta: float = 0.0) -> float:
    """``0.5 * sum_ij kappa_ij * ||x_j - x_i||^2`` (Euclidean)."""
    x = _check(net, g, x)
    k = kappa_matrix(net, g, x, delta)
    d2 = ((x[None, :, :] - x[:, None, :]) ** 2).sum(axis=2)
    return 0.5 * float((k * d2).sum())


def leader_partition(ig: ImitationGraph) -> dict[int, frozenset[int]]:
    """Map each vertex to the maximal vertices reachable from it."""
    succ = [[] for _ in range(ig.n)]
    for i, j in ig.edges:
        succ[i].append(j)
    leaders: dict[int, frozenset[int]] = {}
    for v in reversed(ig.order):
        if not succ[v]:
            leaders[v] = frozenset([v])
        else:
            leaders[v] = frozenset().union(*(leaders[u] for u in succ[v]))
    return dict(sorted(leaders.items()))
