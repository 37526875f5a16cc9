"""A fad spreading from one player on a complete graph and on a hub-rich graph.

Prints the peak share of adopters and when the trend dies out, and compares
seeding a hub against seeding a leaf.
"""

import numpy as np

from imitanet import TrendParams, barabasi_albert, complete
from imitanet.trend import TrendConfig, run_trend

params = TrendParams(R=1, S=0, T=2, P=3, beta=0.9)
for alpha in (0.1, 0.25):
    tr = run_trend(complete(100), TrendConfig(params, seeds=frozenset({0}), alpha=alpha, horizon=400))
    print(f"complete graph, alpha={alpha}: peak share {tr.max_pi:.2f}, collapse at t={tr.collapse_time}")

net = barabasi_albert(100, 2, seed=np.random.default_rng(1))
deg = net.degrees
for label, v in (("hub", int(np.argmax(deg))), ("leaf", int(np.argmin(deg)))):
    tr = run_trend(net, TrendConfig(params, seeds=frozenset({v}), alpha=0.2, horizon=3000))
    print(f"preferential attachment, {label} seed (degree {deg[v]}): peak share {tr.max_pi:.2f}")
