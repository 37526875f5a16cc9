"""Prisoner's dilemma play that rewires the karate club network.

Players imitate for 25 steps, then every edge is kept or dropped by mutual
benefit. The network ends as disjoint cliques whose members agree; on this
graph the surviving clique is usually everyone.
"""

from imitanet import karate_club, prisoners_dilemma
from imitanet.config import PROFILE_STREAM, random_profile, stream
from imitanet.dynamics import SimConfig
from imitanet.topology import EvolutionConfig, coevolve, component_diameters

net, game = karate_club(), prisoners_dilemma(8, -4, 10, 2)
for seed in range(5):
    x = random_profile(stream(seed, 0, PROFILE_STREAM), net.n, 2)
    tr = coevolve(net, game, x, SimConfig(alpha=0.1, record=False), EvolutionConfig(tau=25, max_epochs=2000))
    final = tr.final_network
    sizes = sorted((len(c) for c in final.components()), reverse=True)
    coop = [round(float(tr.final[c[0], 0]), 3) for c in final.components()]
    print(f"seed {seed}: {tr.epochs} epochs, cliques {final.is_clique_partition()}, sizes {sizes}, "
          f"cooperation per component {coop}, max diameter {max(component_diameters(final, tr.final)):.1e}")
