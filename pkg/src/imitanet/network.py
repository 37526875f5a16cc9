"""Undirected weighted graphs for network games.

Vertices are ``0..n-1`` internally. Edge-list files use 1-based labels so the
Karate Club hubs read as vertices 1 and 34.
"""

from __future__ import annotations

import os
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "Network",
    "complete",
    "cycle",
    "path",
    "star",
    "karate_club",
    "barabasi_albert",
    "read_edgelist",
    "write_edgelist",
    "format_edgelist",
    "parse_edgelist",
]


def _key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


class Network:
    """Immutable undirected graph with symmetric non-negative edge weights.

    ``add_edge``/``remove_edge`` return new networks; the original is left
    untouched so snapshots can be shared between runs.
    """

    def __init__(self, n: int, edges: Iterable = ()):
        n = int(n)
        if n < 1:
            raise ValueError(f"network needs at least one vertex, got n={n}")
        self.n = n
        w: dict[tuple[int, int], float] = {}
        for e in edges:
            if len(e) == 2:
                i, j = e
                weight = 1.0
            else:
                i, j, weight = e
            i, j, weight = int(i), int(j), float(weight)
            self._check_pair(i, j)
            if not np.isfinite(weight) or weight < 0:
                raise ValueError(f"edge weight must be finite and >= 0, got {weight}")
            k = _key(i, j)
            if k in w:
                raise ValueError(f"duplicate edge {{{i}, {j}}}")
            w[k] = weight
        self._w = w

    def _check_pair(self, i: int, j: int) -> None:
        if i == j:
            raise ValueError(f"self-loop at vertex {i} is not allowed")
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise ValueError(f"edge {{{i}, {j}}} out of range for n={self.n}")

    # -- queries --------------------------------------------------------
    @property
    def edges(self) -> list[tuple[int, int]]:
        """Edges as sorted ``(i, j)`` pairs with ``i < j``."""
        return sorted(self._w)

    @property
    def num_edges(self) -> int:
        return len(self._w)

    def has_edge(self, i: int, j: int) -> bool:
        return _key(i, j) in self._w

    def weight(self, i: int, j: int) -> float:
        try:
            return self._w[_key(i, j)]
        except KeyError:
            raise KeyError(f"no edge {{{i}, {j}}}") from None

    def weighted_edges(self) -> Iterator[tuple[int, int, float]]:
        for (i, j) in self.edges:
            yield i, j, self._w[(i, j)]

    def neighbors(self, i: int) -> list[int]:
        return [int(j) for j in np.flatnonzero(self.adjacency[i])]

    def degree(self, i: int) -> int:
        return int(self.degrees[i])

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self._w:
            a[i, j] = a[j, i] = True
        a.flags.writeable = False
        return a

    @cached_property
    def weights(self) -> np.ndarray:
        """Dense symmetric weight matrix (zero off the edge set)."""
        w = np.zeros((self.n, self.n))
        for (i, j), v in self._w.items():
            w[i, j] = w[j, i] = v
        w.flags.writeable = False
        return w

    @cached_property
    def degrees(self) -> np.ndarray:
        d = self.adjacency.sum(axis=1)
        d.flags.writeable = False
        return d

    # -- mutation (returns copies) --------------------------------------
    def add_edge(self, i: int, j: int, w: float = 1.0) -> "Network":
        self._check_pair(i, j)
        if self.has_edge(i, j):
            raise ValueError(f"edge {{{i}, {j}}} already present")
        return Network(self.n, [*self.weighted_edges(), (i, j, w)])

    def remove_edge(self, i: int, j: int) -> "Network":
        self._check_pair(i, j)
        if not self.has_edge(i, j):
            raise ValueError(f"edge {{{i}, {j}}} not present")
        k = _key(i, j)
        return Network(self.n, [e for e in self.weighted_edges() if e[:2] != k])

    def with_edges(self, remove: Iterable = (), add: Iterable = ()) -> "Network":
        """Apply a batch of removals then additions in one copy."""
        w = dict(self._w)
        for i, j in remove:
            k = _key(i, j)
            if k not in w:
                raise ValueError(f"edge {{{i}, {j}}} not present")
            del w[k]
        for e in add:
            i, j = e[0], e[1]
            self._check_pair(i, j)
            k = _key(i, j)
            if k in w:
                raise ValueError(f"edge {{{i}, {j}}} already present")
            w[k] = float(e[2]) if len(e) > 2 else 1.0
        return Network(self.n, [(i, j, v) for (i, j), v in w.items()])

    # -- structure --------------------------------------------------------
    def components(self) -> list[list[int]]:
        """Connected components, each sorted, ordered by smallest vertex."""
        seen = np.zeros(self.n, dtype=bool)
        adj = self.adjacency
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in np.flatnonzero(adj[v] & ~seen):
                    seen[u] = True
                    stack.append(int(u))
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def is_clique_partition(self) -> bool:
        """True iff every connected component is a complete graph."""
        for comp in self.components():
            k = len(comp)
            sub = self.adjacency[np.ix_(comp, comp)]
            if sub.sum() != k * (k - 1):
                return False
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return self.n == other.n and self._w == other._w

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._w.items())))

    def __repr__(self) -> str:
        return f"Network(n={self.n}, edges={self.num_edges})"


# -- generators -------------------------------------------------------------

def complete(n: int) -> Network:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return Network(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle(n: int) -> Network:
    if n < 3:
        raise ValueError("cycle graph needs n >= 3")
    return Network(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Network:
    if n < 1:
        raise ValueError("path graph needs n >= 1")
    return Network(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves: int) -> Network:
    """Vertex 0 joined to ``leaves`` leaf vertices."""
    return Network(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


# Zachary (1977), 1-based labels.
_KARATE_CLUB = {
    1: (2, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 18, 20, 22, 32),
    2: (3, 4, 8, 14, 18, 20, 22, 31),
    3: (4, 8, 9, 10, 14, 28, 29, 33),
    4: (8, 13, 14),
    5: (7, 11),
    6: (7, 11, 17),
    7: (17,),
    9: (31, 33, 34),
    10: (34,),
    14: (34,),
    15: (33, 34),
    16: (33, 34),
    19: (33, 34),
    20: (34,),
    21: (33, 34),
    23: (33, 34),
    24: (26, 28, 30, 33, 34),
    25: (26, 28, 32),
    26: (32,),
    27: (30, 34),
    28: (34,),
    29: (32, 34),
    30: (33, 34),
    31: (33, 34),
    32: (33, 34),
    33: (34,),
}


def karate_club() -> Network:
    """Zachary's Karate Club: 34 vertices, 78 edges, hubs at labels 1 and 34."""
    return Network(34, [(u - 1, v - 1) for u, vs in _KARATE_CLUB.items() for v in vs])


def barabasi_albert(n: int, m: int = 2, seed=None) -> Network:
    """Preferential-attachment graph.

    Starts from a complete core on ``m`` vertices. Each later vertex links to
    ``m`` distinct earlier vertices drawn without replacement with probability
    proportional to degree (uniform while every degree is zero). The result
    is connected with ``m*(m-1)/2 + m*(n-m)`` edges.

    ``seed`` may be an int, a ``numpy.random.SeedSequence`` or a
    ``numpy.random.Generator``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if m >= n:
        raise ValueError(f"need m < n, got m={m}, n={n}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    edges = [(i, j) for i in range(m) for j in range(i + 1, m)]
    deg = np.zeros(n)
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    for v in range(m, n):
        w = deg[:v]
        total = w.sum()
        if v == m:
            targets = np.arange(m)
        else:
            p = w / total if total > 0 else None
            targets = rng.choice(v, size=m, replace=False, p=p)
        for t in sorted(int(t) for t in targets):
            edges.append((t, v))
            deg[t] += 1
            deg[v] += 1
    return Network(n, edges)


# -- edge-list I/O ----------------------------------------------------------

def format_edgelist(net: Network) -> str:
    lines = [f"# n {net.n}"]
    for i, j, w in net.weighted_edges():
        lines.append(f"{i + 1} {j + 1}" if w == 1.0 else f"{i + 1} {j + 1} {w!r}")
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str, n: int | None = None) -> Network:
    """Parse ``i j [w]`` lines with 1-based labels.

    A ``# n <count>`` comment fixes the vertex count (needed for isolated
    vertices); otherwise the largest label is used.
    """
    edges = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "n":
                declared = int(parts[1])
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ValueError(f"line {lineno}: expected 'i j [w]', got {raw!r}")
        i, j = int(parts[0]), int(parts[1])
        if i < 1 or j < 1:
            raise ValueError(f"line {lineno}: labels are 1-based")
        w = float(parts[2]) if len(parts) == 3 else 1.0
        edges.append((i - 1, j - 1, w))
    if n is None:
        n = declared
    if n is None:
        n = max((max(i, j) for i, j, _ in edges), default=0) + 1
    return Network(n, edges)


def read_edgelist(path: str | os.PathLike, n: int | None = None) -> Network:
    with open(path) as fh:
        return parse_edgelist(fh.read(), n)


def write_edgelist(net: Network, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(format_edgelist(net))
