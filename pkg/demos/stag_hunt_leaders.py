"""Two stag-hunting leaders on the karate club network.

Checks the max-min separation for a few hull floors, then runs the
dynamics from a profile where the condition holds and one where it fails.
The condition is only sufficient: the second run also ends at the stag.
"""

import numpy as np

from imitanet import SimConfig, karate_club, run, stag_hunt
from imitanet.analysis import max_min_condition

net, game = karate_club(), stag_hunt()
leaders = [0, 33]


def profile(a):
    x = np.tile([a, 1 - a], (net.n, 1))
    x[leaders] = [1.0, 0.0]
    return x


for a in (0.7, 0.8, 5 / 6, 0.9, 0.95):
    rec = max_min_condition(net, game, profile(a), leaders)
    print(f"floor a={a:.4f}: lhs={rec.lhs:7.3f} rhs={rec.rhs:7.3f} holds={rec.holds}")

for a in (0.9, 0.5):
    tr = run(net, game, profile(a), SimConfig(alpha=0.1, horizon=5000, record=False))
    share = tr.final[:, 0]
    print(f"start a={a}: {tr.steps} steps, stag share min {share.min():.4f} max {share.max():.4f}")
