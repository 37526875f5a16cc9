import numpy as np
import pytest

from imitanet.config import random_profile, stream
from imitanet.dynamics import SimConfig
from imitanet.games import Game, prisoners_dilemma, rps
from imitanet.network import Network, barabasi_albert, complete, karate_club, path
from imitanet.topology import (
    EvolutionConfig, coevolve, component_diameters, edge_delta, edge_values, epoch_changes, is_pairwise_stable,
    pd_link_condition, pd_link_threshold, topology_epoch,
)

E1, E2 = [1.0, 0.0], [0.0, 1.0]
PD = prisoners_dilemma(3, -1, 5, 2)


def test_edge_delta_examples():
    assert edge_delta(Network(2), PD, [E2, E1], 0, 1) == (5, -1)
    assert edge_delta(path(2), PD, [E2, E1], 0, 1) == (-5, 1)
    with pytest.raises(ValueError):
        edge_delta(path(2), PD, [E2, E1], 0, 0)


def test_edge_delta_zero_sum_antisymmetric():
    rng = np.random.default_rng(0)
    g = rps(0)
    for _ in range(200):
        x = rng.dirichlet(np.ones(3), size=2)
        di, dj = edge_delta(Network(2), g, x, 0, 1)
        assert abs(di + dj) < 1e-12


def test_positive_matrix_identical_strategies():
    g = Game([[2, 1], [1, 3]])
    x = np.tile([0.4, 0.6], (2, 1))
    di, dj = edge_delta(Network(2), g, x, 0, 1)
    assert di > 0 and dj > 0


def test_zero_sum_epoch_edgeless():
    rng = np.random.default_rng(1)
    for _ in range(20):
        net = barabasi_albert(20, 2, seed=int(rng.integers(1 << 30)))
        x = rng.dirichlet(np.ones(3), size=20)
        new = topology_epoch(net, rps(0), x)
        assert new.num_edges == 0 and is_pairwise_stable(new, rps(0), x)


def test_positive_matrix_epoch_complete():
    rng = np.random.default_rng(2)
    g = Game(rng.uniform(0.1, 5, size=(3, 3)))
    net = path(6)
    x = rng.dirichlet(np.ones(3), size=6)
    new = topology_epoch(net, g, x)
    assert new == complete(6) and is_pairwise_stable(new, g, x)


def test_zero_value_edge_removed():
    g = Game([[0, 1], [1, 1]])
    new = topology_epoch(path(2), g, [E1, E1])
    assert new.num_edges == 0


def test_epoch_changes_frozen_and_ordered():
    x = [E2, E1, E2, E1]
    remove, add = epoch_changes(complete(4), PD, x)
    # defector-cooperator edges have value -1 for the cooperator and go
    assert remove == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert add == []


def test_negative_edge_not_stable():
    assert not is_pairwise_stable(path(2), PD, [E2, E1])


def test_edge_values_matrix():
    x = np.array([E2, E1])
    assert edge_values(PD, x).tolist() == [[2, 5], [-1, 3]]


def test_pd_link_threshold_examples():
    assert pd_link_threshold(3, -1, 5, 2, 1.0) == pytest.approx(0.25)
    assert pd_link_threshold(3, -1, 5, 2, 0.0) == pytest.approx(-2 / 3)
    assert pd_link_condition(3, -1, 5, 2, 0.0, 0.0)
    with pytest.raises(ZeroDivisionError):
        pd_link_threshold(3, -1, 5, 2, -3.0)
    with pytest.raises(ValueError):
        pd_link_condition(1, 2, 3, 4, 0.5, 0.5)


def test_pd_link_condition_agrees_with_edge_delta():
    rng = np.random.default_rng(3)
    checked = 0
    for _ in range(1000):
        xi, xj = rng.random(2)
        x = np.array([[xi, 1 - xi], [xj, 1 - xj]])
        di, _ = edge_delta(Network(2), PD, x, 0, 1)
        if abs(di) < 1e-9:
            continue
        assert pd_link_condition(3, -1, 5, 2, xi, xj) == (di > 0)
        checked += 1
    assert checked > 900


def test_coevolve_rps_edgeless_after_first_epoch():
    k = karate_club()
    x = random_profile(stream(1, 0, 1), 34, 3)
    tr = coevolve(k, rps(0), x, SimConfig(alpha=0.1), EvolutionConfig(tau=25, max_epochs=3))
    assert tr.networks[1].num_edges == 0 and tr.stable


def test_coevolve_pd_complete_graph_consensus():
    x = random_profile(stream(2, 0, 1), 8, 2)
    g = prisoners_dilemma(8, -4, 10, 2)
    tr = coevolve(complete(8), g, x, SimConfig(alpha=0.2, horizon=10), EvolutionConfig(tau=50, max_epochs=100))
    assert tr.final_network.is_clique_partition()
    assert max(component_diameters(tr.final_network, tr.final)) < 1e-6


def test_coevolve_tau_one_positive_matrix():
    g = Game([[2, 1], [1, 3]])
    x = random_profile(stream(3, 0, 1), 10, 2)
    tr = coevolve(path(10), g, x, SimConfig(alpha=0.1), EvolutionConfig(tau=1, max_epochs=500))
    assert tr.networks[1] == complete(10)
    assert all(net == complete(10) for net in tr.networks[1:])


def test_coevolve_deterministic_and_manifest():
    k = karate_club()
    x = random_profile(stream(4, 0, 1), 34, 2)
    a = coevolve(k, PD, x, SimConfig(alpha=0.1), EvolutionConfig(tau=25, max_epochs=5))
    b = coevolve(k, PD, x, SimConfig(alpha=0.1), EvolutionConfig(tau=25, max_epochs=5))
    assert [n.edges for n in a.networks] == [n.edges for n in b.networks]
    assert np.array_equal(a.final, b.final)
    m = a.manifest()
    assert m[0]["epoch"] == 0 and m[0]["edges"] == 78 and sum(m[0]["component_sizes"]) == 34


def test_evolution_config_validation():
    with pytest.raises(ValueError):
        EvolutionConfig(tau=0)
    with pytest.raises(ValueError):
        EvolutionConfig(max_epochs=0)
