"""Slow, loop-based reference implementations used as test oracles."""

import numpy as np


def naive_payoffs(net, A, x):
    p = []
    for i in range(net.n):
        p.append(sum(float(x[i] @ A @ x[j]) for j in net.neighbors(i)))
    return p


def naive_step(net, A, x, alpha, delta=0.0):
    p = naive_payoffs(net, A, x)
    thr = max(delta, 1e-12)
    out = []
    for i in range(net.n):
        gaps = {j: net.weight(i, j) * (p[j] - p[i]) for j in net.neighbors(i) if p[j] - p[i] > thr}
        s = sum(gaps.values())
        xi = np.array(x[i], dtype=float)
        if s > 0:
            xi = xi + alpha * sum(g / s * (x[j] - x[i]) for j, g in gaps.items())
        out.append(xi)
    return np.array(out)


def random_case(rng, n_max=8, m_max=3):
    from imitanet.games import Game
    from imitanet.network import Network

    n = int(rng.integers(2, n_max + 1))
    m = int(rng.integers(2, m_max + 1))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5]
    edges = [(i, j, float(rng.choice([1.0, rng.uniform(0.1, 3)]))) for i, j in pairs]
    net = Network(n, edges)
    g = Game(rng.integers(-5, 6, size=(m, m)).astype(float))
    x = rng.dirichlet(np.ones(m), size=n)
    return net, g, x
